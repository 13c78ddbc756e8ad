// NEON (AArch64) variants. Advanced SIMD is mandatory on AArch64, so no
// runtime feature check is needed beyond compiling this file.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "textfx/simd/kernels.hpp"

namespace textfx::simd {
namespace {

AbsStats abs_stats(const float* x, std::size_t n) {
  float64x2_t sq = vdupq_n_f64(0.0), ab = vdupq_n_f64(0.0), mx = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vcvt_f64_f32(vld1_f32(x + i));
    const float64x2_t a = vabsq_f64(v);
    sq = vfmaq_f64(sq, v, v);
    ab = vaddq_f64(ab, a);
    mx = vmaxq_f64(mx, a);
  }
  AbsStats s{vaddvq_f64(sq), vaddvq_f64(ab), vmaxvq_f64(mx)};
  for (; i < n; ++i) {
    const double v = x[i];
    const double a = std::fabs(v);
    s.sum_sq += v * v;
    s.sum_abs += a;
    s.max_abs = std::max(s.max_abs, a);
  }
  return s;
}

double abs_dev_sq(const float* x, std::size_t n, double mu) {
  const float64x2_t muv = vdupq_n_f64(mu);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vabsq_f64(vcvt_f64_f32(vld1_f32(x + i))), muv);
    acc = vfmaq_f64(acc, d, d);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = std::fabs(static_cast<double>(x[i])) - mu;
    total += d * d;
  }
  return total;
}

SpectralSums spectral_sums(const double* mag, std::size_t n) {
  float64x2_t k = {0.0, 1.0};
  const float64x2_t step = vdupq_n_f64(2.0);
  float64x2_t s0 = vdupq_n_f64(0.0), s1 = vdupq_n_f64(0.0), s2 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t m = vld1q_f64(mag + i);
    const float64x2_t km = vmulq_f64(k, m);
    s0 = vaddq_f64(s0, m);
    s1 = vaddq_f64(s1, km);
    s2 = vfmaq_f64(s2, k, km);
    k = vaddq_f64(k, step);
  }
  SpectralSums s{vaddvq_f64(s0), vaddvq_f64(s1), vaddvq_f64(s2)};
  for (; i < n; ++i) {
    const double kk = static_cast<double>(i);
    s.mag += mag[i];
    s.bin_mag += kk * mag[i];
    s.bin_sq_mag += kk * kk * mag[i];
  }
  return s;
}

void axpby(float* out, const float* x, const float* y, float a, float b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float32x4_t by = vmulq_n_f32(vld1q_f32(y + i), b);
    vst1q_f32(out + i, vfmaq_n_f32(by, vld1q_f32(x + i), a));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale(float* x, float s, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) vst1q_f32(x + i, vmulq_n_f32(vld1q_f32(x + i), s));
  for (; i < n; ++i) x[i] *= s;
}

void accumulate_enveloped(double* acc, const double* band, const double* env, double g,
                          std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ge = vmulq_n_f64(vld1q_f64(env + i), g);
    vst1q_f64(acc + i, vfmaq_f64(vld1q_f64(acc + i), ge, vld1q_f64(band + i)));
  }
  for (; i < n; ++i) acc[i] += g * env[i] * band[i];
}

void complex_mul(double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t av = vld1q_f64(a + 2 * i);             // [ar, ai]
    const float64x2_t bre = vdupq_n_f64(b[2 * i]);           // [br, br]
    const float64x2_t bim = {-b[2 * i + 1], b[2 * i + 1]};   // [-bi, bi]
    const float64x2_t aswap = vextq_f64(av, av, 1);          // [ai, ar]
    vst1q_f64(a + 2 * i, vfmaq_f64(vmulq_f64(aswap, bim), av, bre));
  }
}

void pairwise_sq_dist(const double* x, std::size_t n, const double* y, std::size_t m,
                      std::size_t dim, double* out) {
  const std::size_t vec_end = dim - dim % 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x + i * dim;
    for (std::size_t j = 0; j < m; ++j) {
      const double* yj = y + j * dim;
      float64x2_t acc = vdupq_n_f64(0.0);
      for (std::size_t d = 0; d < vec_end; d += 2) {
        const float64x2_t diff = vsubq_f64(vld1q_f64(xi + d), vld1q_f64(yj + d));
        acc = vfmaq_f64(acc, diff, diff);
      }
      double total = vaddvq_f64(acc);
      for (std::size_t d = vec_end; d < dim; ++d) {
        const double diff = xi[d] - yj[d];
        total += diff * diff;
      }
      out[i * m + j] = total;
    }
  }
}

}  // namespace

const KernelTable* neon_kernels() {
  static const KernelTable table{
      "neon",         abs_stats,   abs_dev_sq,           spectral_sums,   axpby,
      scale,          accumulate_enveloped, complex_mul, pairwise_sq_dist,
  };
  return &table;
}

}  // namespace textfx::simd
