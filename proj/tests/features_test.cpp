#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/oracles.hpp"
#include "textfx/core/error.hpp"
#include "textfx/features/features.hpp"
#include "textfx/fx/eq.hpp"

using namespace textfx;
using features::DspFeatures;

namespace {

constexpr int kSr = 44100;

constexpr const char* kExampleText = R"({
    "sample_rate": 44100,
    "rms_energy": 0.04,
    "crest_factor": 11.86,
    "dynamic_spread": 0.06,
    "spectral_centroid": 1476.24,
    "spectral_flatness": 0.01,
    "spectral_bandwidth": 1796.65,
    "estimated_rt60": 2.94
})";

// Direct O(N^2) DFT centroid over bins 0..N/2.
double dft_centroid(std::span<const float> x, int sr) {
  const std::size_t n = x.size();
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ph = -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / n;
      re += x[t] * std::cos(ph);
      im += x[t] * std::sin(ph);
    }
    const double mag = std::hypot(re, im);
    num += mag * k * sr / static_cast<double>(n);
    den += mag;
  }
  return num / den;
}

// White noise shaped by 10^(-3t/T), so the energy falls 60 dB after T seconds.
AudioBuffer decaying_noise(double t60, std::uint64_t seed, double seconds = 3.0) {
  auto x = oracle::white_noise(kSr, seconds, seed, 0.8);
  auto ch = x.channel(0);
  for (std::size_t i = 0; i < ch.size(); ++i)
    ch[i] = static_cast<float>(ch[i] * std::pow(10.0, -3.0 * (static_cast<double>(i) / kSr) / t60));
  return x;
}

}  // namespace

TEST_CASE("constant signal") {
  const auto f = features::extract_features(AudioBuffer::mono(kSr, std::vector<float>(4096, 0.5f)));
  CHECK(f.rms_energy == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(*f.crest_factor == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(f.dynamic_spread == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("sine closed form and direct-sum centroid") {
  const auto x = oracle::sine(kSr, 1000.0, 0.5, 2.0);
  const auto f = features::extract_features(x);
  CHECK(std::fabs(f.rms_energy - 0.5 / std::sqrt(2.0)) <= 1e-3);
  CHECK(std::fabs(*f.crest_factor - std::sqrt(2.0)) <= 0.01 * std::sqrt(2.0));
  CHECK(std::fabs(f.spectral_centroid - 1000.0) <= 5.0);
  CHECK(f.sample_rate == kSr);

  // Short clip where the quadratic DFT is cheap.
  const auto small = oracle::sine(8000, 700.0, 0.3, 0.125);
  const auto g = features::extract_features(small);
  CHECK(g.spectral_centroid == doctest::Approx(dft_centroid(small.channel(0), 8000)).epsilon(1e-9));
}

TEST_CASE("stereo input is averaged to mono") {
  const auto l = oracle::sine(kSr, 440.0, 0.4, 0.5);
  AudioBuffer st(kSr, {std::vector<float>(l.channel(0).begin(), l.channel(0).end()),
                       std::vector<float>(l.frames(), 0.0f)});
  const auto f = features::extract_features(st);
  CHECK(f.rms_energy == doctest::Approx(0.2 / std::sqrt(2.0)).epsilon(2e-3));
}

TEST_CASE("reference object serializes and round-trips byte-identically") {
  const auto f = features::parse_features(kExampleText);
  CHECK(f.sample_rate == 44100);
  CHECK(*f.crest_factor == 11.86);
  CHECK(features::serialize_features(f) == kExampleText);

  DspFeatures g = f;
  g.spectral_centroid = 1476.239;
  CHECK(features::serialize_features(g) == kExampleText);
}

TEST_CASE("silent input") {
  const AudioBuffer zero(kSr, 1, 2048);
  try {
    features::extract_features(zero);
    FAIL("expected SilentSignal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SilentSignal);
  }
  const auto f = features::extract_features(zero, {.allow_silent = true});
  CHECK(f.silent());
  const auto text = features::serialize_features(f);
  CHECK(text.find("\"rms_energy\": 0.0") != std::string::npos);
  CHECK(text.find("crest_factor") == std::string::npos);
  CHECK(text.find("\"silent\": true") != std::string::npos);
}

TEST_CASE("too-short input") {
  try {
    features::extract_features(oracle::sine(kSr, 440.0, 0.5, 100.0 / kSr));
    FAIL("expected TooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooShort);
  }
}

TEST_CASE("RT60 of constructed exponential decays") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const double est = features::estimate_rt60(decaying_noise(0.8, seed));
    CHECK(std::fabs(est - 0.8) <= 0.08);
  }
  CHECK(features::estimate_rt60(decaying_noise(2.0, 4, 4.0)) > features::estimate_rt60(decaying_noise(0.5, 4, 4.0)));

  std::vector<float> impulse(kSr / 2, 0.0f);
  impulse[0] = 1.0f;
  CHECK(features::estimate_rt60(impulse, kSr) == 0.0);
}

TEST_CASE("amplitude scaling") {
  Rng rng(90);
  for (int trial = 0; trial < 8; ++trial) {
    const auto x = oracle::white_noise(kSr, 0.3, 100 + trial, 0.9);
    const double a = rng.uniform(0.05, 1.0);
    std::vector<float> scaled(x.channel(0).begin(), x.channel(0).end());
    for (auto& v : scaled) v = static_cast<float>(a * v);
    const auto f = features::extract_features(x);
    const auto g = features::extract_features(AudioBuffer::mono(kSr, scaled));
    // Float32 storage of a*x limits agreement to single precision.
    CHECK(g.rms_energy == doctest::Approx(a * f.rms_energy).epsilon(1e-6));
    CHECK(*g.crest_factor == doctest::Approx(*f.crest_factor).epsilon(1e-6));
    CHECK(g.spectral_centroid == doctest::Approx(f.spectral_centroid).epsilon(1e-6));
    CHECK(g.spectral_flatness == doctest::Approx(f.spectral_flatness).epsilon(1e-6));
    CHECK(g.spectral_bandwidth == doctest::Approx(f.spectral_bandwidth).epsilon(1e-6));
  }
}

TEST_CASE("range invariants on random signals") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    auto x = oracle::white_noise(kSr, rng.uniform(0.01, 0.3), seed, rng.uniform(0.01, 1.0));
    if (seed % 2) {
      fx::EqParams p;
      p.high_shelf = {rng.uniform(-24.0, 24.0), 4000.0, 0.707};
      x = fx::apply_eq(x, p);
    }
    const auto f = features::extract_features(x);
    CHECK(*f.crest_factor >= 1.0);
    CHECK(f.dynamic_spread <= f.rms_energy + 1e-12);
    CHECK(f.spectral_flatness > 0.0);
    CHECK(f.spectral_flatness <= 1.0);
    CHECK(f.spectral_centroid >= 0.0);
    CHECK(f.spectral_centroid <= kSr / 2.0);
    CHECK(f.spectral_bandwidth >= 0.0);
    CHECK(f.spectral_bandwidth <= kSr / 2.0);
  }
}

TEST_CASE("flatness separates tones from noise") {
  CHECK(features::extract_features(oracle::sine(kSr, 1000.0, 0.5, 1.0)).spectral_flatness < 0.1);
  CHECK(features::extract_features(oracle::white_noise(kSr, 1.0, 5)).spectral_flatness > 0.7);
}

TEST_CASE("high-shelf boost raises the centroid") {
  const auto x = oracle::white_noise(kSr, 1.0, 6, 0.1);
  fx::EqParams p;
  p.high_shelf = {12.0, 4000.0, 0.707};
  CHECK(features::extract_features(fx::apply_eq(x, p)).spectral_centroid >
        features::extract_features(x).spectral_centroid + 500.0);
}
