#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "textfx/dataset/socialfx.hpp"

namespace textfx::dataset {

struct MergeRule {
  std::vector<std::string> members;  // includes the representative
  std::string representative;
};

/// One rule per line: "member,member,... -> representative". Blank lines
/// and lines starting with '#' are ignored. The representative is added to
/// its members when not listed. Throws SchemaError on malformed lines.
std::vector<MergeRule> parse_merge_rules(std::string_view text);
std::vector<MergeRule> load_merge_rules(const std::filesystem::path& path);

/// Distinct descriptors across examples of one effect.
std::vector<std::string> vocabulary(const std::vector<RawExample>& examples, fx::FxType fx);

/// Replaces each descriptor by its rule's representative; descriptors that
/// collapse onto the same word within an example are deduplicated.
/// Throws OverlappingRules when a word belongs to two rules.
std::vector<RawExample> apply_merge_rules(const std::vector<RawExample>& examples, const std::vector<MergeRule>& rules);

}  // namespace textfx::dataset
