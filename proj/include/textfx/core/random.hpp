#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace textfx {

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Child seed for a labelled sub-stream, e.g. derive_seed(seed, trial).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept;

/// Seeded generator with platform-stable distributions. The standard
/// distributions are implementation-defined, so uniform/normal are computed
/// here directly from the mt19937_64 bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller (caches the second variate).
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Fisher-Yates with the platform-stable Rng.
template <typename It>
void shuffle(It first, It last, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = rng.below(i);
    using std::swap;
    swap(first[i - 1], first[j]);
  }
}

}  // namespace textfx
