#include "textfx/core/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "textfx/simd/kernels.hpp"

namespace textfx::fft {
namespace {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

RealBuffer alloc_real(std::size_t n) {
  return RealBuffer(fftw_alloc_real(std::max<std::size_t>(n, 1)));
}
ComplexBuffer alloc_complex(std::size_t n) {
  return ComplexBuffer(fftw_alloc_complex(std::max<std::size_t>(n, 1)));
}

// The FFTW planner is not thread-safe; execution with the new-array interface
// is. Plans are created once per (size, direction) under a lock and reused.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan forward(std::size_t n) { return get(n, true); }
  fftw_plan inverse(std::size_t n) { return get(n, false); }

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

 private:
  fftw_plan get(std::size_t n, bool forward) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, forward);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto real = alloc_real(n);
    auto cplx = alloc_complex(n / 2 + 1);
    const int len = static_cast<int>(n);
    fftw_plan plan = forward
                         ? fftw_plan_dft_r2c_1d(len, real.get(), cplx.get(), FFTW_ESTIMATE)
                         : fftw_plan_dft_c2r_1d(len, cplx.get(), real.get(), FFTW_ESTIMATE);
    plans_.emplace(key, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

}  // namespace

std::size_t next_fast_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2u, 3u, 5u, 7u})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  auto in = alloc_real(n);
  auto out = alloc_complex(n / 2 + 1);
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute_dft_r2c(PlanCache::instance().forward(n), in.get(), out.get());
  std::vector<std::complex<double>> bins(n / 2 + 1);
  for (std::size_t k = 0; k < bins.size(); ++k) bins[k] = {out[k][0], out[k][1]};
  return bins;
}

std::vector<double> rfft_magnitude(std::span<const float> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  auto in = alloc_real(n);
  auto out = alloc_complex(n / 2 + 1);
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute_dft_r2c(PlanCache::instance().forward(n), in.get(), out.get());
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
  return mag;
}

std::vector<double> irfft(std::span<const std::complex<double>> bins, std::size_t n) {
  if (n == 0) return {};
  auto in = alloc_complex(n / 2 + 1);
  auto out = alloc_real(n);
  for (std::size_t k = 0; k < n / 2 + 1; ++k) {
    const auto v = k < bins.size() ? bins[k] : std::complex<double>{};
    in[k][0] = v.real();
    in[k][1] = v.imag();
  }
  fftw_execute_dft_c2r(PlanCache::instance().inverse(n), in.get(), out.get());
  std::vector<double> result(out.get(), out.get() + n);
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : result) v *= inv;
  return result;
}

std::vector<double> convolve(std::span<const float> x, std::span<const double> h,
                             std::size_t out_len) {
  if (x.empty() || h.empty() || out_len == 0) return std::vector<double>(out_len, 0.0);
  // Samples past out_len in either operand cannot reach the kept outputs.
  x = x.first(std::min(x.size(), out_len));
  h = h.first(std::min(h.size(), out_len));
  const std::size_t full = x.size() + h.size() - 1;
  const std::size_t needed = std::min(full, out_len);
  const std::size_t n = next_fast_size(full);
  const std::size_t bins = n / 2 + 1;

  auto& plans = PlanCache::instance();
  auto xa = alloc_real(n);
  auto ha = alloc_real(n);
  auto xf = alloc_complex(bins);
  auto hf = alloc_complex(bins);
  std::fill_n(xa.get(), n, 0.0);
  std::fill_n(ha.get(), n, 0.0);
  std::copy(x.begin(), x.end(), xa.get());
  std::copy(h.begin(), h.end(), ha.get());
  fftw_execute_dft_r2c(plans.forward(n), xa.get(), xf.get());
  fftw_execute_dft_r2c(plans.forward(n), ha.get(), hf.get());

  simd::active_kernels().complex_mul(reinterpret_cast<double*>(xf.get()),
                                     reinterpret_cast<const double*>(hf.get()), bins);

  fftw_execute_dft_c2r(plans.inverse(n), xf.get(), xa.get());
  std::vector<double> y(out_len, 0.0);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < needed; ++i) y[i] = xa[i] * inv;
  return y;
}

}  // namespace textfx::fft
