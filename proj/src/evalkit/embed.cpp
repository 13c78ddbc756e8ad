#include "textfx/evalkit/embed.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "textfx/core/error.hpp"

namespace textfx::evalkit {

Standardizer Standardizer::fit(std::span<const features::DspFeatures> corpus) {
  std::vector<Vec> rows;
  rows.reserve(corpus.size());
  for (const auto& f : corpus) rows.push_back(f.to_vector());
  return fit(rows);
}

Standardizer Standardizer::fit(std::span<const Vec> corpus) {
  if (corpus.empty()) fail(ErrorCode::InsufficientData, "cannot standardize an empty corpus");
  Standardizer s;
  const auto n = static_cast<double>(corpus.size());
  for (const auto& v : corpus)
    for (std::size_t d = 0; d < v.size(); ++d) s.mean[d] += v[d];
  for (double& m : s.mean) m /= n;
  for (const auto& v : corpus)
    for (std::size_t d = 0; d < v.size(); ++d) s.std[d] += (v[d] - s.mean[d]) * (v[d] - s.mean[d]);
  for (double& sd : s.std) sd = std::max(std::sqrt(sd / n), kStdFloor);
  return s;
}

Embedding Standardizer::apply(const Vec& v) const {
  Embedding e(v.size());
  // A dimension that is constant over the corpus carries no information; it
  // maps to 0 rather than amplifying off-corpus deviations by 1/floor.
  for (std::size_t d = 0; d < v.size(); ++d) e[d] = std[d] <= kStdFloor ? 0.0 : (v[d] - mean[d]) / std[d];
  return e;
}

Embedding Standardizer::apply(const features::DspFeatures& f) const { return apply(f.to_vector()); }

}  // namespace textfx::evalkit
