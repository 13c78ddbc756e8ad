#include "textfx/fx/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "textfx/core/error.hpp"

namespace textfx::fx {
namespace {

std::array<std::string_view, EqParams::kFieldCount> make_eq_keys() {
  return {"low_shelf_gain_db", "low_shelf_cutoff_freq", "low_shelf_q",
          "band1_gain_db",     "band1_cutoff_freq",     "band1_q",
          "band2_gain_db",     "band2_cutoff_freq",     "band2_q",
          "band3_gain_db",     "band3_cutoff_freq",     "band3_q",
          "band4_gain_db",     "band4_cutoff_freq",     "band4_q",
          "high_shelf_gain_db", "high_shelf_cutoff_freq", "high_shelf_q"};
}

std::array<std::string_view, ReverbParams::kFieldCount> make_reverb_keys() {
  return {"band0_gain",  "band1_gain",  "band2_gain",  "band3_gain",  "band4_gain",
          "band5_gain",  "band6_gain",  "band7_gain",  "band8_gain",  "band9_gain",
          "band10_gain", "band11_gain", "band0_decay", "band1_decay", "band2_decay",
          "band3_decay", "band4_decay", "band5_decay", "band6_decay", "band7_decay",
          "band8_decay", "band9_decay", "band10_decay", "band11_decay", "mix"};
}

std::string describe(std::string_view key, double value, FieldRange r) {
  std::ostringstream os;
  os << key << " = " << value << " outside [" << r.lo << ", " << r.hi << "]";
  return os.str();
}

template <typename P>
Clamped<P> clamp_fields(const P& p, int sample_rate) {
  auto values = p.to_array();
  std::vector<std::string> changed;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const FieldRange r = P::range(i, sample_rate);
    double v = values[i];
    double c = std::isfinite(v) ? std::clamp(v, r.lo, r.hi) : 0.5 * (r.lo + r.hi);
    if (c != v) {
      values[i] = c;
      changed.emplace_back(P::keys()[i]);
    }
  }
  return {P::from_array(values), std::move(changed)};
}

}  // namespace

double max_cutoff_hz(int sample_rate) noexcept {
  return std::min(kMaxCutoffHz, 0.45 * sample_rate);
}

std::string_view to_string(FxType fx) noexcept { return fx == FxType::Eq ? "eq" : "reverb"; }

std::optional<FxType> parse_fx_type(std::string_view label) noexcept {
  if (label == "eq") return FxType::Eq;
  if (label == "reverb") return FxType::Reverb;
  return std::nullopt;
}

const std::array<std::string_view, EqParams::kFieldCount>& EqParams::keys() {
  static const auto k = make_eq_keys();
  return k;
}

FieldRange EqParams::range(std::size_t field, int sample_rate) {
  switch (field % 3) {
    case 0: return {kMinGainDb, kMaxGainDb};
    case 1: return {kMinCutoffHz, max_cutoff_hz(sample_rate)};
    default: return {kMinQ, kMaxQ};
  }
}

std::array<double, EqParams::kFieldCount> EqParams::to_array() const {
  std::array<double, kFieldCount> v{};
  auto put = [&](std::size_t slot, const EqBand& b) {
    v[3 * slot] = b.gain_db;
    v[3 * slot + 1] = b.cutoff_hz;
    v[3 * slot + 2] = b.q;
  };
  put(0, low_shelf);
  for (std::size_t i = 0; i < kPeakCount; ++i) put(i + 1, peaks[i]);
  put(kPeakCount + 1, high_shelf);
  return v;
}

EqParams EqParams::from_array(const std::array<double, kFieldCount>& v) {
  auto get = [&](std::size_t slot) { return EqBand{v[3 * slot], v[3 * slot + 1], v[3 * slot + 2]}; };
  EqParams p;
  p.low_shelf = get(0);
  for (std::size_t i = 0; i < kPeakCount; ++i) p.peaks[i] = get(i + 1);
  p.high_shelf = get(kPeakCount + 1);
  return p;
}

const std::array<std::string_view, ReverbParams::kFieldCount>& ReverbParams::keys() {
  static const auto k = make_reverb_keys();
  return k;
}

FieldRange ReverbParams::range(std::size_t field, int) {
  if (field < kBands) return {0.0, 1.0};
  if (field < 2 * kBands) return {0.0, kMaxDecaySeconds};
  return {0.0, 1.0};
}

std::array<double, ReverbParams::kFieldCount> ReverbParams::to_array() const {
  std::array<double, kFieldCount> v{};
  std::copy(band_gain.begin(), band_gain.end(), v.begin());
  std::copy(band_decay.begin(), band_decay.end(), v.begin() + kBands);
  v[2 * kBands] = mix;
  return v;
}

ReverbParams ReverbParams::from_array(const std::array<double, kFieldCount>& v) {
  ReverbParams p;
  std::copy(v.begin(), v.begin() + kBands, p.band_gain.begin());
  std::copy(v.begin() + kBands, v.begin() + 2 * kBands, p.band_decay.begin());
  p.mix = v[2 * kBands];
  return p;
}

const std::array<double, GraphicEqParams::kBands>& GraphicEqParams::center_frequencies() {
  static const auto freqs = [] {
    std::array<double, kBands> f{};
    for (std::size_t i = 0; i < kBands; ++i)
      f[i] = 20.0 * std::pow(1000.0, static_cast<double>(i) / (kBands - 1));
    return f;
  }();
  return freqs;
}

FxType fx_type_of(const ParamSet& p) noexcept {
  return std::holds_alternative<EqParams>(p) ? FxType::Eq : FxType::Reverb;
}

void validate(const EqParams& p, int sample_rate) {
  const auto values = p.to_array();
  const double nyquist = 0.5 * sample_rate;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto key = EqParams::keys()[i];
    const double v = values[i];
    if (!std::isfinite(v)) fail(ErrorCode::InvalidParams, std::string(key) + " is not finite");
    if (i % 3 == 1 && v >= nyquist) {
      std::ostringstream os;
      os << key << " = " << v << " Hz is at or above Nyquist (" << nyquist << " Hz)";
      fail(ErrorCode::SampleRateConflict, os.str());
    }
    const FieldRange r = EqParams::range(i, sample_rate);
    if (v < r.lo || v > r.hi) fail(ErrorCode::InvalidParams, describe(key, v, r));
  }
}

void validate(const ReverbParams& p) {
  const auto values = p.to_array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto key = ReverbParams::keys()[i];
    const double v = values[i];
    if (!std::isfinite(v)) fail(ErrorCode::InvalidParams, std::string(key) + " is not finite");
    const FieldRange r = ReverbParams::range(i);
    if (v < r.lo || v > r.hi) fail(ErrorCode::InvalidParams, describe(key, v, r));
  }
}

void validate(const GraphicEqParams& p) {
  for (std::size_t i = 0; i < p.gains_db.size(); ++i) {
    const double v = p.gains_db[i];
    const std::string key = "gains_db[" + std::to_string(i) + "]";
    if (!std::isfinite(v)) fail(ErrorCode::InvalidParams, key + " is not finite");
    if (v < kMinGainDb || v > kMaxGainDb)
      fail(ErrorCode::InvalidParams, describe(key, v, {kMinGainDb, kMaxGainDb}));
  }
}

Clamped<EqParams> clamp(const EqParams& p, int sample_rate) { return clamp_fields(p, sample_rate); }

Clamped<ReverbParams> clamp(const ReverbParams& p) { return clamp_fields(p, kNominalSampleRate); }

Clamped<ParamSet> clamp(const ParamSet& p, int sample_rate) {
  return std::visit(
      [&](const auto& inner) -> Clamped<ParamSet> {
        auto c = clamp_fields(inner, sample_rate);
        return {ParamSet(c.params), std::move(c.fields)};
      },
      p);
}

ParamSet sample_uniform(FxType fx, Rng& rng, int sample_rate) {
  auto draw = [&]<typename P>(std::type_identity<P>) {
    std::array<double, P::kFieldCount> v{};
    for (std::size_t i = 0; i < v.size(); ++i) {
      const FieldRange r = P::range(i, sample_rate);
      v[i] = rng.uniform(r.lo, r.hi);
    }
    return ParamSet(P::from_array(v));
  };
  return fx == FxType::Eq ? draw(std::type_identity<EqParams>{})
                          : draw(std::type_identity<ReverbParams>{});
}

}  // namespace textfx::fx
