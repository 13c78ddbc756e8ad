#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used by the effects, feature extractor and MMD.
//
// Every kernel has a scalar reference implementation; SIMD variants must match
// it up to floating-point reassociation (tests/simd_equivalence_test.cpp).
// Reductions always accumulate in double regardless of input precision.

namespace textfx::simd {

struct AbsStats {
  double sum_sq = 0.0;   // sum x^2
  double sum_abs = 0.0;  // sum |x|
  double max_abs = 0.0;  // max |x|
};

struct SpectralSums {
  double mag = 0.0;         // sum m[k]
  double bin_mag = 0.0;     // sum k * m[k]
  double bin_sq_mag = 0.0;  // sum k^2 * m[k]
};

struct KernelTable {
  std::string_view name;

  AbsStats (*abs_stats)(const float* x, std::size_t n);

  /// sum (|x| - mu)^2
  double (*abs_dev_sq)(const float* x, std::size_t n, double mu);

  /// Sums over k in [0, n) of m, k*m and k^2*m.
  SpectralSums (*spectral_sums)(const double* mag, std::size_t n);

  /// out = a*x + b*y
  void (*axpby)(float* out, const float* x, const float* y, float a, float b, std::size_t n);

  /// x *= s
  void (*scale)(float* x, float s, std::size_t n);

  /// acc[i] += g * env[i] * band[i]
  void (*accumulate_enveloped)(double* acc, const double* band, const double* env, double g,
                               std::size_t n);

  /// Interleaved complex a[i] *= b[i] (re, im pairs; n complex values).
  void (*complex_mul)(double* a, const double* b, std::size_t n);

  /// out[i*m + j] = ||x_i - y_j||^2 for row-major x (n*dim) and y (m*dim).
  void (*pairwise_sq_dist)(const double* x, std::size_t n, const double* y, std::size_t m,
                           std::size_t dim, double* out);
};

const KernelTable& scalar_kernels();

/// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// The table used by the library: best available variant, unless the
/// TEXTFX_SIMD environment variable is "scalar" (read once, at first call).
const KernelTable& active_kernels();

}  // namespace textfx::simd
