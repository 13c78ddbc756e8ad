#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textfx/dataset/socialfx.hpp"

namespace textfx::dataset {

inline constexpr std::size_t kEqTfThreshold = 20;
inline constexpr std::size_t kReverbTfThreshold = 100;

std::size_t default_tf_threshold(fx::FxType fx) noexcept;

/// Number of examples of `fx` carrying each word.
std::map<std::string, std::size_t> term_frequencies(const std::vector<RawExample>& examples, fx::FxType fx);

/// Keeps examples of `fx` only, removes descriptors whose term frequency is
/// below the threshold, and drops examples left without descriptors.
std::vector<RawExample> tf_filter(const std::vector<RawExample>& examples, fx::FxType fx,
                                  std::optional<std::size_t> threshold = std::nullopt);

/// Restricts descriptors to `keep` and drops examples left without any.
std::vector<RawExample> restrict_vocabulary(const std::vector<RawExample>& examples,
                                            const std::vector<std::string>& keep);

}  // namespace textfx::dataset
