#include "textfx/dataset/merge.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "textfx/core/error.hpp"

namespace textfx::dataset {
namespace {

std::string clean(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::vector<MergeRule> parse_merge_rules(std::string_view text) {
  std::vector<MergeRule> rules;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = clean(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto arrow = trimmed.find("->");
    if (arrow == std::string::npos)
      fail(ErrorCode::SchemaError, "merge rule line " + std::to_string(line_no) + " lacks \"->\"");
    MergeRule rule;
    rule.representative = clean(std::string_view(trimmed).substr(arrow + 2));
    if (rule.representative.empty())
      fail(ErrorCode::SchemaError, "merge rule line " + std::to_string(line_no) + " has no representative");
    std::string_view members = std::string_view(trimmed).substr(0, arrow);
    std::size_t start = 0;
    while (start <= members.size()) {
      const auto end = std::min(members.find(',', start), members.size());
      std::string word = clean(members.substr(start, end - start));
      if (!word.empty() && std::find(rule.members.begin(), rule.members.end(), word) == rule.members.end())
        rule.members.push_back(std::move(word));
      start = end + 1;
    }
    if (std::find(rule.members.begin(), rule.members.end(), rule.representative) == rule.members.end())
      rule.members.push_back(rule.representative);
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::vector<MergeRule> load_merge_rules(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::FileNotFound, "cannot open merge rules " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_merge_rules(ss.str());
}

std::vector<std::string> vocabulary(const std::vector<RawExample>& examples, fx::FxType fx) {
  std::set<std::string> words;
  for (const auto& ex : examples)
    if (ex.fx == fx) words.insert(ex.descriptors.begin(), ex.descriptors.end());
  return {words.begin(), words.end()};
}

std::vector<RawExample> apply_merge_rules(const std::vector<RawExample>& examples,
                                          const std::vector<MergeRule>& rules) {
  std::map<std::string, std::string> canonical;
  for (const auto& rule : rules)
    for (const auto& m : rule.members)
      if (!canonical.emplace(m, rule.representative).second)
        fail(ErrorCode::OverlappingRules, "word \"" + m + "\" appears in more than one merge rule");

  std::vector<RawExample> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    RawExample merged = ex;
    merged.descriptors.clear();
    for (const auto& d : ex.descriptors) {
      auto it = canonical.find(d);
      const std::string& word = it == canonical.end() ? d : it->second;
      if (std::find(merged.descriptors.begin(), merged.descriptors.end(), word) == merged.descriptors.end())
        merged.descriptors.push_back(word);
    }
    out.push_back(std::move(merged));
  }
  return out;
}

}  // namespace textfx::dataset
