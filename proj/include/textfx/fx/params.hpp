#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "textfx/core/random.hpp"

namespace textfx::fx {

inline constexpr int kNominalSampleRate = 44100;

inline constexpr double kMinGainDb = -24.0;
inline constexpr double kMaxGainDb = 24.0;
inline constexpr double kMinQ = 0.1;
inline constexpr double kMaxQ = 10.0;
inline constexpr double kMinCutoffHz = 20.0;
inline constexpr double kMaxCutoffHz = 20000.0;
inline constexpr double kMaxDecaySeconds = 30.0;

/// Upper cutoff bound: min(20 kHz, 0.45 * sample_rate).
double max_cutoff_hz(int sample_rate) noexcept;

struct FieldRange {
  double lo;
  double hi;
};

enum class FxType { Eq, Reverb };

std::string_view to_string(FxType fx) noexcept;
std::optional<FxType> parse_fx_type(std::string_view label) noexcept;

struct EqBand {
  double gain_db = 0.0;
  double cutoff_hz = 1000.0;
  double q = 1.0;

  friend bool operator==(const EqBand&, const EqBand&) = default;
};

/// Six-band parametric EQ: low shelf, four peaking bands, high shelf.
/// Flattened field order (18 values) is gain_db, cutoff_freq, q per band.
struct EqParams {
  static constexpr std::size_t kFieldCount = 18;
  static constexpr std::size_t kPeakCount = 4;

  EqBand low_shelf{0.0, 120.0, 0.707};
  std::array<EqBand, kPeakCount> peaks{{{0.0, 262.4, 1.0},
                                        {0.0, 573.9, 1.0},
                                        {0.0, 1255.2, 1.0},
                                        {0.0, 2745.3, 1.0}}};
  EqBand high_shelf{0.0, 6000.0, 0.707};

  static const std::array<std::string_view, kFieldCount>& keys();
  static FieldRange range(std::size_t field, int sample_rate = kNominalSampleRate);

  std::array<double, kFieldCount> to_array() const;
  static EqParams from_array(const std::array<double, kFieldCount>& values);

  friend bool operator==(const EqParams&, const EqParams&) = default;
};

/// Twelve-band noise-shaped reverb. Flattened order matches the JSON key
/// order: band0_gain..band11_gain, band0_decay..band11_decay, mix.
struct ReverbParams {
  static constexpr std::size_t kBands = 12;
  static constexpr std::size_t kFieldCount = 2 * kBands + 1;

  std::array<double, kBands> band_gain{};
  std::array<double, kBands> band_decay{};
  double mix = 0.0;

  static const std::array<std::string_view, kFieldCount>& keys();
  static FieldRange range(std::size_t field, int sample_rate = kNominalSampleRate);

  std::array<double, kFieldCount> to_array() const;
  static ReverbParams from_array(const std::array<double, kFieldCount>& values);

  friend bool operator==(const ReverbParams&, const ReverbParams&) = default;
};

/// Forty fixed log-spaced bands from 20 Hz to 20 kHz; gains only.
struct GraphicEqParams {
  static constexpr std::size_t kBands = 40;
  static constexpr double kBandQ = 4.31;

  std::array<double, kBands> gains_db{};

  static const std::array<double, kBands>& center_frequencies();

  friend bool operator==(const GraphicEqParams&, const GraphicEqParams&) = default;
};

using ParamSet = std::variant<EqParams, ReverbParams>;

FxType fx_type_of(const ParamSet& p) noexcept;

/// Throws InvalidParams naming the first offending field, or
/// SampleRateConflict when a cutoff is at or above Nyquist.
void validate(const EqParams& p, int sample_rate);
void validate(const ReverbParams& p);
void validate(const GraphicEqParams& p);

template <typename P>
struct Clamped {
  P params;
  std::vector<std::string> fields;  // keys whose values were changed
};

/// Clamps every field into its valid range. Non-finite values clamp to the
/// range midpoint. Idempotent.
Clamped<EqParams> clamp(const EqParams& p, int sample_rate = kNominalSampleRate);
Clamped<ReverbParams> clamp(const ReverbParams& p);
Clamped<ParamSet> clamp(const ParamSet& p, int sample_rate = kNominalSampleRate);

/// Independent uniform draw of every field over its valid range.
ParamSet sample_uniform(FxType fx, Rng& rng, int sample_rate = kNominalSampleRate);

}  // namespace textfx::fx
