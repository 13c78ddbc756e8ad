#include "textfx/fx/eq.hpp"

namespace textfx::fx {

std::vector<Biquad> graphic_eq_sections(const GraphicEqParams& params, int sample_rate) {
  const auto& centers = GraphicEqParams::center_frequencies();
  const double limit = 0.45 * sample_rate;
  std::vector<Biquad> sections;
  sections.reserve(GraphicEqParams::kBands);
  for (std::size_t i = 0; i < GraphicEqParams::kBands; ++i) {
    if (centers[i] >= limit) continue;
    sections.push_back(
        design_peaking(sample_rate, centers[i], params.gains_db[i], GraphicEqParams::kBandQ));
  }
  return sections;
}

std::vector<double> graphic_eq_response_db(const GraphicEqParams& params,
                                           std::span<const double> freqs_hz, int sample_rate) {
  const auto sections = graphic_eq_sections(params, sample_rate);
  std::vector<double> out;
  out.reserve(freqs_hz.size());
  for (double f : freqs_hz) out.push_back(cascade_magnitude_db(sections, f, sample_rate));
  return out;
}

AudioBuffer apply_graphic_eq(const AudioBuffer& audio, const GraphicEqParams& params) {
  validate(params);
  const auto sections = graphic_eq_sections(params, audio.sample_rate());
  AudioBuffer out = audio;
  for (std::size_t c = 0; c < out.channels(); ++c) process_cascade(sections, out.channel(c));
  return out;
}

}  // namespace textfx::fx
