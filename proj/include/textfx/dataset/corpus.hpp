#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "textfx/dataset/fit.hpp"
#include "textfx/dataset/merge.hpp"
#include "textfx/dataset/probe.hpp"
#include "textfx/dataset/socialfx.hpp"
#include "textfx/evalkit/render.hpp"

namespace textfx::dataset {

struct PipelineOptions {
  std::optional<std::size_t> eq_tf_threshold;      // default 20
  std::optional<std::size_t> reverb_tf_threshold;  // default 100
  ProbeConfig probe;
  bool run_probe = true;
  std::uint64_t render_seed = 0;
  std::size_t parallelism = 1;
};

struct StageCounts {
  std::size_t examples = 0;
  std::size_t vocabulary = 0;
};

/// What happened to one effect's examples at each stage.
struct FxPipelineLog {
  fx::FxType fx = fx::FxType::Eq;
  std::size_t tf_threshold = 0;
  StageCounts raw, merged, tf, probe;
  std::vector<std::string> dropped_by_tf;
  std::vector<std::string> dropped_by_probe;
  ProbeScores probe_scores;
  std::vector<std::string> vocabulary;          // surviving words
  std::map<std::string, std::size_t> counts;    // parameter sets per word
  double avg_effects_per_word = 0.0;            // sum(counts) / |vocabulary|
  double fit_residual_mean_db = 0.0;            // EQ only
  double fit_residual_max_db = 0.0;
};

struct EvalCorpus {
  std::map<fx::FxType, evalkit::Reference> references;
  std::map<fx::FxType, FxPipelineLog> logs;
  std::map<fx::FxType, std::vector<RawExample>> examples;  // filtered rows
  std::size_t skipped_rows = 0;
};

/// Ground truth for one effect. EQ rows render through the graphic EQ and
/// replay as their parametric fit; reverb rows are already in the reverb
/// schema. Multi-word rows count towards every word they carry.
evalkit::Reference build_reference(const std::vector<RawExample>& filtered, fx::FxType fx,
                                   int sample_rate = fx::kNominalSampleRate,
                                   std::vector<double>* fit_residuals = nullptr);

/// Merge, term-frequency and probe filtering for both effects followed by
/// reference construction. Throws MissingFixture without fixtures.
EvalCorpus run_pipeline(const LoadResult& raw, const std::vector<MergeRule>& rules,
                        const std::vector<evalkit::Fixture>& fixtures, const PipelineOptions& options);

/// Writes manifest.json, groundtruth_<fx>.json and cached raw features
/// (embeddings_<fx>_<instrument>.bin + .json header) into `dir`.
/// Returns the manifest.
nlohmann::ordered_json write_corpus(const std::filesystem::path& dir, const EvalCorpus& corpus,
                                    const std::vector<evalkit::Fixture>& fixtures, const PipelineOptions& options,
                                    evalkit::RenderCache& cache);

/// Manifest without file hashes: stage counts, vocabularies and sizes.
nlohmann::ordered_json pipeline_summary(const EvalCorpus& corpus);

struct LoadedCorpus {
  std::map<fx::FxType, evalkit::Reference> references;
  nlohmann::json manifest;
  std::uint64_t render_seed = 0;
};

/// Reads a corpus directory. When the recorded fixture digests match
/// `fixtures`, cached features are inserted into `cache`. Throws
/// MissingCorpus when the directory or manifest is absent.
LoadedCorpus load_corpus(const std::filesystem::path& dir, const std::vector<evalkit::Fixture>& fixtures,
                         evalkit::RenderCache* cache = nullptr);

/// SHA-256 of a fixture's sample rate, shape and float samples.
std::string fixture_digest(const evalkit::Fixture& f);

}  // namespace textfx::dataset
