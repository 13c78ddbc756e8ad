#pragma once

#include <optional>
#include <span>
#include <vector>

namespace textfx::evalkit {

using Embedding = std::vector<double>;

struct KernelConfig {
  /// Gaussian bandwidth sigma; unset means the median heuristic over the
  /// pooled pairwise distances of X and Y.
  std::optional<double> bandwidth;
};

struct MmdResult {
  double mmd2 = 0.0;   // max(0, biased estimate)
  double score = 0.0;  // sqrt(mmd2)
  double sigma = 0.0;  // bandwidth actually used
};

/// Median of ||z_i - z_j|| over i < j in the pooled set.
double median_heuristic(std::span<const Embedding> x, std::span<const Embedding> y);

/// Biased (V-statistic) MMD^2 with Gaussian kernel exp(-d^2 / (2 sigma^2)).
/// Requires |X|, |Y| >= 2 and equal dimensions (DimensionMismatch), and a
/// positive bandwidth (DegenerateKernel when the heuristic yields 0).
MmdResult mmd(std::span<const Embedding> x, std::span<const Embedding> y, const KernelConfig& kernel = {});

inline double mmd2(std::span<const Embedding> x, std::span<const Embedding> y, const KernelConfig& kernel = {}) {
  return mmd(x, y, kernel).mmd2;
}

}  // namespace textfx::evalkit
