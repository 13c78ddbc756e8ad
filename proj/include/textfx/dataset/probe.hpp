#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "textfx/dataset/socialfx.hpp"
#include "textfx/evalkit/mmd.hpp"
#include "textfx/evalkit/render.hpp"

namespace textfx::dataset {

struct ProbeConfig {
  std::size_t folds = 5;
  std::size_t epochs = 400;
  double learning_rate = 0.5;
  double l2 = 1e-2;
  std::uint64_t seed = 0;
};

struct ProbeScores {
  std::vector<std::string> words;
  std::vector<double> f1;           // out-of-fold, per word
  std::vector<double> baseline_f1;  // same classifier on random embeddings
  double baseline_macro_f1 = 0.0;   // the drop threshold
  std::vector<std::string> kept;
  std::vector<std::string> dropped;
};

/// Out-of-fold per-class F1 of a multinomial logistic regression trained by
/// full-batch gradient descent under stratified k-fold cross-validation.
/// Throws InsufficientData when a class has fewer samples than folds.
std::vector<double> cross_validated_f1(const std::vector<evalkit::Embedding>& x, const std::vector<std::size_t>& labels,
                                       std::size_t classes, const ProbeConfig& cfg);

/// Scores every word and the unit-Gaussian random-embedding baseline of the
/// same shape; words whose F1 does not exceed the baseline macro F1 are
/// dropped.
ProbeScores probe_scores(const std::vector<evalkit::Embedding>& x, const std::vector<std::size_t>& labels,
                         const std::vector<std::string>& words, const ProbeConfig& cfg);

/// Render schema of a native row: graphic EQ for EQ, reverb as is.
evalkit::AnyParams native_params(const RawExample& ex);

struct ProbeOutcome {
  std::vector<RawExample> examples;
  ProbeScores scores;
};

/// Renders every example onto each fixture, embeds the concatenated
/// per-fixture standardized features, and filters words by probe score.
/// Multi-word examples contribute one labelled sample per word.
ProbeOutcome probe_filter(const std::vector<RawExample>& examples, fx::FxType fx,
                          const std::vector<evalkit::Fixture>& fixtures, const ProbeConfig& cfg,
                          std::uint64_t render_seed = 0, std::size_t parallelism = 1,
                          evalkit::RenderCache* cache = nullptr);

}  // namespace textfx::dataset
