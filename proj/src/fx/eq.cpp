#include "textfx/fx/eq.hpp"

#include <algorithm>

namespace textfx::fx {

std::vector<Biquad> eq_sections(const EqParams& params, int sample_rate) {
  const double fs = sample_rate;
  std::vector<Biquad> sections;
  sections.reserve(EqParams::kPeakCount + 2);
  const auto& ls = params.low_shelf;
  sections.push_back(design_low_shelf(fs, ls.cutoff_hz, ls.gain_db, ls.q));

  std::array<EqBand, EqParams::kPeakCount> peaks = params.peaks;
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const EqBand& a, const EqBand& b) { return a.cutoff_hz < b.cutoff_hz; });
  for (const auto& p : peaks) sections.push_back(design_peaking(fs, p.cutoff_hz, p.gain_db, p.q));

  const auto& hs = params.high_shelf;
  sections.push_back(design_high_shelf(fs, hs.cutoff_hz, hs.gain_db, hs.q));
  return sections;
}

std::vector<double> eq_response_db(const EqParams& params, std::span<const double> freqs_hz,
                                   int sample_rate) {
  const auto sections = eq_sections(params, sample_rate);
  std::vector<double> out;
  out.reserve(freqs_hz.size());
  for (double f : freqs_hz) out.push_back(cascade_magnitude_db(sections, f, sample_rate));
  return out;
}

AudioBuffer apply_eq(const AudioBuffer& audio, const EqParams& params) {
  validate(params, audio.sample_rate());
  const auto sections = eq_sections(params, audio.sample_rate());
  AudioBuffer out = audio;
  for (std::size_t c = 0; c < out.channels(); ++c) process_cascade(sections, out.channel(c));
  return out;
}

}  // namespace textfx::fx
