#pragma once

#include <span>
#include <vector>

#include "textfx/core/audio_buffer.hpp"
#include "textfx/fx/biquad.hpp"
#include "textfx/fx/params.hpp"

namespace textfx::fx {

/// Section list in processing order: low shelf, peaks by ascending cutoff,
/// high shelf. Does not validate.
std::vector<Biquad> eq_sections(const EqParams& params, int sample_rate);

/// Cascade magnitude response in dB at each frequency.
std::vector<double> eq_response_db(const EqParams& params, std::span<const double> freqs_hz,
                                   int sample_rate);

/// Six-band parametric EQ applied independently to every channel.
AudioBuffer apply_eq(const AudioBuffer& audio, const EqParams& params);

/// Peaking sections of the 40-band graphic EQ; bands whose center lies at or
/// above 0.45 * sample_rate are omitted.
std::vector<Biquad> graphic_eq_sections(const GraphicEqParams& params, int sample_rate);

std::vector<double> graphic_eq_response_db(const GraphicEqParams& params,
                                           std::span<const double> freqs_hz, int sample_rate);

AudioBuffer apply_graphic_eq(const AudioBuffer& audio, const GraphicEqParams& params);

}  // namespace textfx::fx
