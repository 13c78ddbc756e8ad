#pragma once

// Reference computations for tests, written without the library's kernels
// so that they can serve as independent oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "textfx/core/audio_buffer.hpp"
#include "textfx/core/random.hpp"

namespace oracle {

inline textfx::AudioBuffer sine(int sr, double freq, double amp, double seconds, std::size_t channels = 1) {
  const auto n = static_cast<std::size_t>(std::lround(seconds * sr));
  std::vector<float> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = static_cast<float>(amp * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / sr));
  return textfx::AudioBuffer(sr, std::vector<std::vector<float>>(channels, x));
}

inline textfx::AudioBuffer white_noise(int sr, double seconds, std::uint64_t seed, double amp = 0.25,
                                       std::size_t channels = 1) {
  const auto n = static_cast<std::size_t>(std::lround(seconds * sr));
  textfx::Rng rng(seed);
  std::vector<std::vector<float>> ch(channels, std::vector<float>(n));
  for (auto& c : ch)
    for (auto& v : c) v = static_cast<float>(rng.uniform(-amp, amp));
  return textfx::AudioBuffer(sr, std::move(ch));
}

inline double rms(std::span<const float> x) {
  double s = 0.0;
  for (float v : x) s += static_cast<double>(v) * v;
  return x.empty() ? 0.0 : std::sqrt(s / static_cast<double>(x.size()));
}

/// RMS ratio (dB) of the second half of two equally long signals.
inline double steady_gain_db(std::span<const float> dry, std::span<const float> wet) {
  const std::size_t half = dry.size() / 2;
  return 20.0 * std::log10(rms(wet.subspan(half)) / rms(dry.subspan(half)));
}

inline double max_abs_diff(std::span<const float> a, std::span<const float> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    m = std::max(m, std::fabs(static_cast<double>(a[i]) - b[i]));
  return a.size() == b.size() ? m : INFINITY;
}

using Vec = std::vector<double>;

inline double sq_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

/// Plain double-sum biased MMD^2 with an explicit bandwidth.
inline double mmd2(const std::vector<Vec>& x, const std::vector<Vec>& y, double sigma) {
  auto k = [&](const Vec& a, const Vec& b) { return std::exp(-sq_dist(a, b) / (2.0 * sigma * sigma)); };
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (const auto& a : x)
    for (const auto& b : x) xx += k(a, b);
  for (const auto& a : y)
    for (const auto& b : y) yy += k(a, b);
  for (const auto& a : x)
    for (const auto& b : y) xy += k(a, b);
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  return xx / (n * n) + yy / (m * m) - 2.0 * xy / (n * m);
}

/// Median pairwise Euclidean distance over the pooled set.
inline double median_distance(const std::vector<Vec>& x, const std::vector<Vec>& y) {
  std::vector<Vec> z = x;
  z.insert(z.end(), y.begin(), y.end());
  std::vector<double> d;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j) d.push_back(std::sqrt(sq_dist(z[i], z[j])));
  std::sort(d.begin(), d.end());
  const std::size_t n = d.size();
  return n % 2 ? d[n / 2] : 0.5 * (d[n / 2 - 1] + d[n / 2]);
}

inline std::vector<Vec> gaussian_set(std::size_t n, std::size_t dim, double mean, std::uint64_t seed) {
  textfx::Rng rng(seed);
  std::vector<Vec> out(n, Vec(dim));
  for (auto& v : out)
    for (auto& c : v) c = mean + rng.normal();
  return out;
}

}  // namespace oracle
