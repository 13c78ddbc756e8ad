#include "textfx/dataset/filters.hpp"

#include <algorithm>
#include <set>

namespace textfx::dataset {

std::size_t default_tf_threshold(fx::FxType fx) noexcept {
  return fx == fx::FxType::Eq ? kEqTfThreshold : kReverbTfThreshold;
}

std::map<std::string, std::size_t> term_frequencies(const std::vector<RawExample>& examples, fx::FxType fx) {
  std::map<std::string, std::size_t> tf;
  for (const auto& ex : examples)
    if (ex.fx == fx)
      for (const auto& d : ex.descriptors) ++tf[d];
  return tf;
}

std::vector<RawExample> restrict_vocabulary(const std::vector<RawExample>& examples,
                                            const std::vector<std::string>& keep) {
  const std::set<std::string> allowed(keep.begin(), keep.end());
  std::vector<RawExample> out;
  for (const auto& ex : examples) {
    RawExample kept = ex;
    std::erase_if(kept.descriptors, [&](const std::string& d) { return !allowed.count(d); });
    if (!kept.descriptors.empty()) out.push_back(std::move(kept));
  }
  return out;
}

std::vector<RawExample> tf_filter(const std::vector<RawExample>& examples, fx::FxType fx,
                                  std::optional<std::size_t> threshold) {
  const std::size_t min_count = threshold.value_or(default_tf_threshold(fx));
  std::vector<RawExample> same_fx;
  for (const auto& ex : examples)
    if (ex.fx == fx) same_fx.push_back(ex);
  std::vector<std::string> keep;
  for (const auto& [word, count] : term_frequencies(same_fx, fx))
    if (count >= min_count) keep.push_back(word);
  return restrict_vocabulary(same_fx, keep);
}

}  // namespace textfx::dataset
