// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// is only reached through avx2_kernels(), which checks the CPU first.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "textfx/simd/kernels.hpp"

namespace textfx::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  const __m128d hi64 = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, hi64));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  const __m128d hi64 = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, hi64));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

AbsStats abs_stats(const float* x, std::size_t n) {
  __m256d sq = _mm256_setzero_pd();
  __m256d ab = _mm256_setzero_pd();
  __m256d mx = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
    const __m256d a = abs_pd(v);
    sq = _mm256_fmadd_pd(v, v, sq);
    ab = _mm256_add_pd(ab, a);
    mx = _mm256_max_pd(mx, a);
  }
  AbsStats s{hsum(sq), hsum(ab), hmax(mx)};
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
  const __m256d muv = _mm256_set1_pd(mu);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(abs_pd(_mm256_cvtps_pd(_mm_loadu_ps(x + i))), muv);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double d = std::fabs(static_cast<double>(x[i])) - mu;
    total += d * d;
  }
  return total;
}

SpectralSums spectral_sums(const double* mag, std::size_t n) {
  __m256d k = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d step = _mm256_set1_pd(4.0);
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd(), s2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = _mm256_loadu_pd(mag + i);
    const __m256d km = _mm256_mul_pd(k, m);
    s0 = _mm256_add_pd(s0, m);
    s1 = _mm256_add_pd(s1, km);
    s2 = _mm256_fmadd_pd(k, km, s2);
    k = _mm256_add_pd(k, step);
  }
  SpectralSums s{hsum(s0), hsum(s1), hsum(s2)};
  for (; i < n; ++i) {
    const double kk = static_cast<double>(i);
    s.mag += mag[i];
    s.bin_mag += kk * mag[i];
    s.bin_sq_mag += kk * kk * mag[i];
  }
  return s;
}

void axpby(float* out, const float* x, const float* y, float a, float b, std::size_t n) {
  const __m256 av = _mm256_set1_ps(a);
  const __m256 bv = _mm256_set1_ps(b);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 by = _mm256_mul_ps(bv, _mm256_loadu_ps(y + i));
    _mm256_storeu_ps(out + i, _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), by));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale(float* x, float s, std::size_t n) {
  const __m256 sv = _mm256_set1_ps(s);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) _mm256_storeu_ps(x + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), sv));
  for (; i < n; ++i) x[i] *= s;
}

void accumulate_enveloped(double* acc, const double* band, const double* env, double g,
                          std::size_t n) {
  const __m256d gv = _mm256_set1_pd(g);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ge = _mm256_mul_pd(gv, _mm256_loadu_pd(env + i));
    _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(ge, _mm256_loadu_pd(band + i), _mm256_loadu_pd(acc + i)));
  }
  for (; i < n; ++i) acc[i] += g * env[i] * band[i];
}

void complex_mul(double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(a + 2 * i);
    const __m256d bv = _mm256_loadu_pd(b + 2 * i);
    const __m256d b_re = _mm256_movedup_pd(bv);
    const __m256d b_im = _mm256_permute_pd(bv, 0xF);
    const __m256d a_swap = _mm256_permute_pd(av, 0x5);
    _mm256_storeu_pd(a + 2 * i, _mm256_fmaddsub_pd(av, b_re, _mm256_mul_pd(a_swap, b_im)));
  }
  for (; i < n; ++i) {
    const double ar = a[2 * i], ai = a[2 * i + 1];
    const double br = b[2 * i], bi = b[2 * i + 1];
    a[2 * i] = ar * br - ai * bi;
    a[2 * i + 1] = ar * bi + ai * br;
  }
}

void pairwise_sq_dist(const double* x, std::size_t n, const double* y, std::size_t m,
                      std::size_t dim, double* out) {
  const std::size_t vec_end = dim - dim % 4;
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x + i * dim;
    for (std::size_t j = 0; j < m; ++j) {
      const double* yj = y + j * dim;
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t d = 0; d < vec_end; d += 4) {
        const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(xi + d), _mm256_loadu_pd(yj + d));
        acc = _mm256_fmadd_pd(diff, diff, acc);
      }
      double total = hsum(acc);
      for (std::size_t d = vec_end; d < dim; ++d) {
        const double diff = xi[d] - yj[d];
        total += diff * diff;
      }
      out[i * m + j] = total;
    }
  }
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const KernelTable table{
      "avx2",         abs_stats,   abs_dev_sq,           spectral_sums,   axpby,
      scale,          accumulate_enveloped, complex_mul, pairwise_sq_dist,
  };
  return supported ? &table : nullptr;
}

}  // namespace textfx::simd
