#include <algorithm>
#include <cmath>

#include "textfx/simd/kernels.hpp"

namespace textfx::simd {
namespace {

AbsStats abs_stats(const float* x, std::size_t n) {
  AbsStats s;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = x[i];
    const double a = std::fabs(v);
    s.sum_sq += v * v;
    s.sum_abs += a;
    s.max_abs = std::max(s.max_abs, a);
  }
  return s;
}

double abs_dev_sq(const float* x, std::size_t n, double mu) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(static_cast<double>(x[i])) - mu;
    acc += d * d;
  }
  return acc;
}

SpectralSums spectral_sums(const double* mag, std::size_t n) {
  SpectralSums s;
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    s.mag += mag[k];
    s.bin_mag += kk * mag[k];
    s.bin_sq_mag += kk * kk * mag[k];
  }
  return s;
}

void axpby(float* out, const float* x, const float* y, float a, float b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale(float* x, float s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

void accumulate_enveloped(double* acc, const double* band, const double* env, double g,
                          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += g * env[i] * band[i];
}

void complex_mul(double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[2 * i], ai = a[2 * i + 1];
    const double br = b[2 * i], bi = b[2 * i + 1];
    a[2 * i] = ar * br - ai * bi;
    a[2 * i + 1] = ar * bi + ai * br;
  }
}

void pairwise_sq_dist(const double* x, std::size_t n, const double* y, std::size_t m,
                      std::size_t dim, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = x[i * dim + d] - y[j * dim + d];
        acc += diff * diff;
      }
      out[i * m + j] = acc;
    }
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",       abs_stats,   abs_dev_sq,           spectral_sums,   axpby,
      scale,          accumulate_enveloped, complex_mul, pairwise_sq_dist,
  };
  return table;
}

}  // namespace textfx::simd
