#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "textfx/core/audio_buffer.hpp"
#include "textfx/features/features.hpp"
#include "textfx/fx/params.hpp"
#include "textfx/textgen/serialize.hpp"

namespace textfx::evalkit {

using textgen::AnyParams;

AnyParams to_any(const fx::ParamSet& p);

/// Applies any supported effect to `dry`. `seed` only affects reverb.
AudioBuffer render(const AudioBuffer& dry, const AnyParams& params, std::uint64_t seed);

/// Renders and extracts features; silent renders yield a silent-marked
/// result rather than an error.
features::DspFeatures render_features(const AudioBuffer& dry, const AnyParams& params, std::uint64_t seed);

/// A dry clip tagged with its instrument label.
struct Fixture {
  std::string instrument;
  AudioBuffer audio;
};

/// The three synthesized dry clips (drums, guitar, piano). A positive
/// `seconds` overrides the default per-instrument durations.
std::vector<Fixture> synthesized_fixtures(double seconds = 0.0, int sample_rate = fx::kNominalSampleRate);

/// Memoizes render_features by (fixture, exact parameter bits, seed).
/// Thread-safe; concurrent misses on one key may compute it twice, with
/// identical results.
class RenderCache {
 public:
  features::DspFeatures features(const Fixture& fixture, const AnyParams& params, std::uint64_t seed);

  /// Seeds the cache with a known result (e.g. loaded from disk).
  void insert(const Fixture& fixture, const AnyParams& params, std::uint64_t seed, const features::DspFeatures& f);

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }

 private:
  std::mutex mutex_;
  std::map<std::string, features::DspFeatures> entries_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

/// Ground truth for one word: what the reference audio is rendered from, and
/// the same examples in the generation schema (used for replay).
struct WordReference {
  std::string word;
  std::vector<AnyParams> render_sets;
  std::vector<fx::ParamSet> param_sets;
};

struct Reference {
  fx::FxType fx = fx::FxType::Eq;
  std::vector<WordReference> words;

  const WordReference* find(const std::string& word) const;
};

}  // namespace textfx::evalkit
