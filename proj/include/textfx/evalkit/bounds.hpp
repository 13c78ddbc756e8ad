#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textfx/evalkit/embed.hpp"
#include "textfx/evalkit/mmd.hpp"
#include "textfx/evalkit/render.hpp"

namespace textfx::evalkit {

inline constexpr std::size_t kDefaultBoundSeeds = 5;
inline constexpr std::size_t kMinReferenceSets = 4;

struct BoundsReport {
  double upper_bound = 0.0;
  double lower_bound = 0.0;
  double delta = 0.0;  // upper_bound - lower_bound
  std::size_t seeds_used = 0;
};

struct CellBounds {
  std::string word;
  std::string instrument;
  BoundsReport bounds;
};

struct WordBounds {
  std::string word;
  BoundsReport bounds;  // mean over instruments
};

struct BoundsResult {
  fx::FxType fx = fx::FxType::Eq;
  std::vector<CellBounds> cells;
  std::vector<WordBounds> words;
  BoundsReport macro;  // mean over words
};

struct BoundsConfig {
  std::size_t seeds = kDefaultBoundSeeds;
  std::uint64_t seed = 0;
  std::uint64_t render_seed = 0;
  KernelConfig kernel;
  std::size_t parallelism = 1;
  /// Random renders per lower-bound draw; unset means as many as the word
  /// has ground-truth sets.
  std::optional<std::size_t> random_count;
};

/// Reference embeddings for one fx: per-instrument standardizer fitted over
/// every word's ground-truth renders, and the standardized renders per word.
struct ReferenceEmbeddings {
  std::map<std::string, Standardizer> stats;  // by instrument
  std::map<std::pair<std::string, std::string>, std::vector<Embedding>> cells;  // (word, instrument)
};

ReferenceEmbeddings embed_reference(const Reference& ref, const std::vector<Fixture>& fixtures,
                                    std::uint64_t render_seed, RenderCache& cache, std::size_t parallelism);

/// Shared pool of uniformly drawn parameter sets for the random baseline:
/// draw k of seed s is the same across words, so words share renders.
fx::ParamSet random_baseline_params(fx::FxType fx, std::uint64_t seed, std::size_t seed_index, std::size_t k,
                                    int sample_rate);

/// Upper bound: MMD between the two halves of a seeded shuffle.
double split_half_mmd(const std::vector<Embedding>& set, std::uint64_t seed, const KernelConfig& kernel);

/// Per word and instrument: mean over seeds of the split-half MMD (upper)
/// and of the MMD between all ground truth and as many uniform-random
/// renders (lower). Throws TooFewSets for words with fewer than four sets.
BoundsResult compute_bounds(const Reference& ref, const std::vector<Fixture>& fixtures, const BoundsConfig& cfg,
                            RenderCache* cache = nullptr);

}  // namespace textfx::evalkit
