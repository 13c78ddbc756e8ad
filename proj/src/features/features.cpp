#include "textfx/features/features.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "textfx/core/fft.hpp"
#include "textfx/simd/kernels.hpp"

namespace textfx::features {
namespace {

using ordered_json = nlohmann::ordered_json;

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

const std::array<std::string_view, DspFeatures::kDims>& DspFeatures::keys() {
  static const std::array<std::string_view, kDims> k{
      "sample_rate",       "rms_energy",        "crest_factor",       "dynamic_spread",
      "spectral_centroid", "spectral_flatness", "spectral_bandwidth", "estimated_rt60"};
  return k;
}

std::array<double, DspFeatures::kDims> DspFeatures::to_vector() const {
  return {static_cast<double>(sample_rate), rms_energy,        crest_factor.value_or(0.0),
          dynamic_spread,                   spectral_centroid, spectral_flatness,
          spectral_bandwidth,               estimated_rt60};
}

DspFeatures extract_features(const AudioBuffer& audio, ExtractOptions options) {
  const std::size_t n = audio.frames();
  if (n < kMinFeatureFrames)
    fail(ErrorCode::TooShort, "feature extraction needs at least 256 frames, got " + std::to_string(n));

  const std::vector<float> x = audio.mixdown();
  const auto& k = simd::active_kernels();
  const double inv_n = 1.0 / static_cast<double>(n);

  DspFeatures f;
  f.sample_rate = audio.sample_rate();

  const simd::AbsStats stats = k.abs_stats(x.data(), n);
  f.rms_energy = std::sqrt(stats.sum_sq * inv_n);
  const bool silent = f.rms_energy < kSilenceRms;
  if (silent && !options.allow_silent)
    fail(ErrorCode::SilentSignal, "signal RMS below 1e-9; crest factor undefined");

  const double mean_abs = stats.sum_abs * inv_n;
  f.dynamic_spread = std::sqrt(k.abs_dev_sq(x.data(), n, mean_abs) * inv_n);
  if (silent) return f;
  f.crest_factor = stats.max_abs / f.rms_energy;

  const std::vector<double> mag = fft::rfft_magnitude(x);
  const std::size_t bins = mag.size();
  const double bin_hz = static_cast<double>(audio.sample_rate()) / static_cast<double>(n);
  const simd::SpectralSums sums = k.spectral_sums(mag.data(), bins);

  if (sums.mag > 0.0) {
    const double mean_bin = sums.bin_mag / sums.mag;
    const double var_bins = std::max(0.0, sums.bin_sq_mag / sums.mag - mean_bin * mean_bin);
    f.spectral_centroid = bin_hz * mean_bin;
    f.spectral_bandwidth = bin_hz * std::sqrt(var_bins);

    double log_sum = 0.0;
    for (double m : mag) log_sum += std::log(std::max(m, kMagnitudeFloor));
    const double geometric = std::exp(log_sum / static_cast<double>(bins));
    const double arithmetic = sums.mag / static_cast<double>(bins);
    f.spectral_flatness = std::min(1.0, geometric / arithmetic);
  }

  f.estimated_rt60 = n >= static_cast<std::size_t>(0.05 * audio.sample_rate())
                         ? estimate_rt60(x, audio.sample_rate())
                         : 0.0;
  return f;
}

double estimate_rt60(const AudioBuffer& ir) {
  if (ir.frames() < static_cast<std::size_t>(0.05 * ir.sample_rate()))
    fail(ErrorCode::TooShort, "RT60 estimation needs at least 50 ms of signal");
  const auto mono = ir.mixdown();
  return estimate_rt60(mono, ir.sample_rate());
}

double estimate_rt60(std::span<const float> mono, int sample_rate) {
  const std::size_t n = mono.size();
  std::vector<double> edc(n);
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double v = mono[i];
    acc += v * v;
    edc[i] = acc;
  }
  const double total = n > 0 ? edc[0] : 0.0;
  if (!(total > 0.0)) fail(ErrorCode::SilentSignal, "cannot estimate RT60 of a silent signal");

  // Decay curve in dB relative to total energy; locate the fit span.
  auto level_db = [&](std::size_t i) { return 10.0 * std::log10(edc[i] / total); };
  std::size_t start = n, stop = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (edc[i] <= 0.0) {
      stop = i;
      break;
    }
    const double db = level_db(i);
    if (start == n && db <= -5.0) start = i;
    if (db < -35.0) {
      stop = i;
      break;
    }
  }
  if (stop == n || start == n || stop <= start + 1) return 0.0;

  // Least-squares slope of dB against time over [start, stop).
  const double fs = sample_rate;
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  const auto count = static_cast<double>(stop - start);
  for (std::size_t i = start; i < stop; ++i) {
    const double t = static_cast<double>(i - start) / fs;
    const double y = level_db(i);
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double denom = count * stt - st * st;
  if (denom <= 0.0) return 0.0;
  const double slope = (count * sty - st * sy) / denom;
  if (slope >= 0.0) return 0.0;
  return -60.0 / slope;
}

std::string serialize_features(const DspFeatures& f) {
  ordered_json j;
  j["sample_rate"] = f.sample_rate;
  j["rms_energy"] = round2(f.rms_energy);
  if (f.crest_factor) j["crest_factor"] = round2(*f.crest_factor);
  j["dynamic_spread"] = round2(f.dynamic_spread);
  j["spectral_centroid"] = round2(f.spectral_centroid);
  j["spectral_flatness"] = round2(f.spectral_flatness);
  j["spectral_bandwidth"] = round2(f.spectral_bandwidth);
  j["estimated_rt60"] = round2(f.estimated_rt60);
  if (!f.crest_factor) j["silent"] = true;
  return j.dump(4);
}

DspFeatures parse_features(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::SchemaError, std::string("feature object is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::SchemaError, "feature object must be a JSON object");
  auto number = [&](std::string_view key) -> double {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number())
      fail(ErrorCode::SchemaError, "feature object lacks numeric \"" + std::string(key) + "\"");
    return it->get<double>();
  };
  DspFeatures f;
  f.sample_rate = static_cast<int>(number("sample_rate"));
  f.rms_energy = number("rms_energy");
  const bool silent = j.value("silent", false);
  if (!silent) f.crest_factor = number("crest_factor");
  f.dynamic_spread = number("dynamic_spread");
  f.spectral_centroid = number("spectral_centroid");
  f.spectral_flatness = number("spectral_flatness");
  f.spectral_bandwidth = number("spectral_bandwidth");
  f.estimated_rt60 = number("estimated_rt60");
  return f;
}

}  // namespace textfx::features
