#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

#include "textfx/core/audio_buffer.hpp"

namespace textfx::features {

inline constexpr std::size_t kMinFeatureFrames = 256;
inline constexpr double kSilenceRms = 1e-9;
inline constexpr double kMagnitudeFloor = 1e-12;

/// The eight signal descriptors handed to the language model as context and
/// used (standardized) as the evaluation embedding.
struct DspFeatures {
  static constexpr std::size_t kDims = 8;

  int sample_rate = 0;
  double rms_energy = 0.0;
  std::optional<double> crest_factor;  // absent for silent input
  double dynamic_spread = 0.0;
  double spectral_centroid = 0.0;
  double spectral_flatness = 1.0;
  double spectral_bandwidth = 0.0;
  double estimated_rt60 = 0.0;

  bool silent() const noexcept { return !crest_factor.has_value(); }

  /// Field order of the serialized object; silent input contributes 0 for
  /// the crest factor.
  std::array<double, kDims> to_vector() const;

  static const std::array<std::string_view, kDims>& keys();

  friend bool operator==(const DspFeatures&, const DspFeatures&) = default;
};

struct ExtractOptions {
  /// Return a silent-marked result instead of throwing SilentSignal.
  bool allow_silent = false;
};

/// Full-signal descriptors of the channel-averaged input. Spectral terms use
/// a single real FFT of the whole signal, bins 0..N/2.
DspFeatures extract_features(const AudioBuffer& audio, ExtractOptions options = {});

/// Schroeder backward integration with a least-squares fit over the
/// -5..-35 dB span of the decay curve, extrapolated to 60 dB. Returns 0 when
/// the curve never reaches -35 dB or the span holds fewer than two samples.
double estimate_rt60(const AudioBuffer& ir);
double estimate_rt60(std::span<const float> mono, int sample_rate);

/// Pretty-printed JSON object (4-space indent), fixed key order, values
/// rounded to two decimals, sample_rate as an integer. Silent features omit
/// crest_factor and carry "silent": true.
std::string serialize_features(const DspFeatures& f);

/// Inverse of serialize_features; throws SchemaError on missing keys.
DspFeatures parse_features(const std::string& text);

}  // namespace textfx::features
