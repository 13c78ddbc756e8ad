#pragma once

// Constructed reference corpora for the bounds protocol.

#include <string>
#include <vector>

#include "textfx/core/random.hpp"
#include "textfx/evalkit/render.hpp"
#include "textfx/textgen/backend.hpp"

namespace oracle {

inline textfx::evalkit::WordReference word_reference(std::string word, std::vector<textfx::fx::ParamSet> sets) {
  textfx::evalkit::WordReference w;
  w.word = std::move(word);
  for (const auto& p : sets) w.render_sets.push_back(textfx::evalkit::to_any(p));
  w.param_sets = std::move(sets);
  return w;
}

// Each word is one tight cluster (+/-2% per field) around a distinct base.
inline textfx::evalkit::Reference tight_cluster_reference(textfx::fx::FxType fx, const std::vector<std::string>& words,
                                                          std::size_t sets_per_word, std::uint64_t seed) {
  textfx::evalkit::Reference ref;
  ref.fx = fx;
  textfx::Rng rng(seed);
  for (const auto& w : words) {
    const auto base = textfx::textgen::MockBackend::rule_based_answer(w, "guitar", fx);
    std::vector<textfx::fx::ParamSet> sets;
    for (std::size_t i = 0; i < sets_per_word; ++i)
      sets.push_back(std::visit(
          [&](auto p) -> textfx::fx::ParamSet {
            auto a = p.to_array();
            for (double& v : a) v *= 1.0 + rng.uniform(-0.02, 0.02);
            return textfx::fx::clamp(decltype(p)::from_array(a)).params;
          },
          base));
    ref.words.push_back(word_reference(w, std::move(sets)));
  }
  return ref;
}

// "Ground truth" drawn from the same uniform law as the random baseline.
inline textfx::evalkit::Reference uniform_reference(textfx::fx::FxType fx, const std::vector<std::string>& words,
                                                    std::size_t sets_per_word, std::uint64_t seed) {
  textfx::evalkit::Reference ref;
  ref.fx = fx;
  textfx::Rng rng(seed);
  for (const auto& w : words) {
    std::vector<textfx::fx::ParamSet> sets;
    for (std::size_t i = 0; i < sets_per_word; ++i) sets.push_back(textfx::fx::sample_uniform(fx, rng));
    ref.words.push_back(word_reference(w, std::move(sets)));
  }
  return ref;
}

}  // namespace oracle
