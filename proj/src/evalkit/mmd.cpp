#include "textfx/evalkit/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "textfx/core/error.hpp"
#include "textfx/simd/kernels.hpp"

namespace textfx::evalkit {
namespace {

std::size_t check_dims(std::span<const Embedding> x, std::span<const Embedding> y) {
  if (x.size() < 2 || y.size() < 2)
    fail(ErrorCode::InvalidArgument, "MMD needs at least two samples per set (got " + std::to_string(x.size()) +
                                         " and " + std::to_string(y.size()) + ")");
  const std::size_t dim = x.front().size();
  if (dim == 0) fail(ErrorCode::DimensionMismatch, "embeddings must not be empty");
  for (auto set : {x, y})
    for (const auto& e : set)
      if (e.size() != dim)
        fail(ErrorCode::DimensionMismatch, "embedding of size " + std::to_string(e.size()) + ", expected " +
                                               std::to_string(dim));
  return dim;
}

std::vector<double> flatten(std::span<const Embedding> set, std::size_t dim) {
  std::vector<double> out;
  out.reserve(set.size() * dim);
  for (const auto& e : set) out.insert(out.end(), e.begin(), e.end());
  return out;
}

std::vector<double> sq_dists(const std::vector<double>& a, std::size_t n, const std::vector<double>& b,
                             std::size_t m, std::size_t dim) {
  std::vector<double> d(n * m);
  simd::active_kernels().pairwise_sq_dist(a.data(), n, b.data(), m, dim, d.data());
  return d;
}

double mean_kernel(const std::vector<double>& d2, double inv_two_sigma_sq) {
  double acc = 0.0;
  for (double v : d2) acc += std::exp(-v * inv_two_sigma_sq);
  return acc / static_cast<double>(d2.size());
}

double median_of_upper(const std::vector<double>& d2, std::size_t n) {
  std::vector<double> dist;
  dist.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist.push_back(std::sqrt(d2[i * n + j]));
  const std::size_t mid = dist.size() / 2;
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid), dist.end());
  const double upper = dist[mid];
  if (dist.size() % 2 == 1) return upper;
  const double lower = *std::max_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

double median_heuristic(std::span<const Embedding> x, std::span<const Embedding> y) {
  const std::size_t dim = check_dims(x, y);
  std::vector<Embedding> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  const auto z = flatten(pooled, dim);
  return median_of_upper(sq_dists(z, pooled.size(), z, pooled.size(), dim), pooled.size());
}

MmdResult mmd(std::span<const Embedding> x, std::span<const Embedding> y, const KernelConfig& kernel) {
  const std::size_t dim = check_dims(x, y);
  const auto fx = flatten(x, dim);
  const auto fy = flatten(y, dim);
  const std::size_t n = x.size();
  const std::size_t m = y.size();

  MmdResult r;
  if (kernel.bandwidth) {
    if (!(*kernel.bandwidth > 0.0) || !std::isfinite(*kernel.bandwidth))
      fail(ErrorCode::DegenerateKernel, "kernel bandwidth must be positive");
    r.sigma = *kernel.bandwidth;
  } else {
    r.sigma = median_heuristic(x, y);
    if (!(r.sigma > 0.0)) fail(ErrorCode::DegenerateKernel, "median heuristic bandwidth is 0 (all points identical)");
  }

  const double g = 1.0 / (2.0 * r.sigma * r.sigma);
  const double kxx = mean_kernel(sq_dists(fx, n, fx, n, dim), g);
  const double kyy = mean_kernel(sq_dists(fy, m, fy, m, dim), g);
  const double kxy = mean_kernel(sq_dists(fx, n, fy, m, dim), g);
  r.mmd2 = std::max(0.0, kxx + kyy - 2.0 * kxy);
  r.score = std::sqrt(r.mmd2);
  return r;
}

}  // namespace textfx::evalkit
