#pragma once

#include <array>
#include <cstdint>

#include "textfx/core/audio_buffer.hpp"
#include "textfx/fx/params.hpp"

namespace textfx::fx {

inline constexpr double kReverbLowEdgeHz = 31.25;
inline constexpr double kReverbHighEdgeHz = 16000.0;
/// Bands with a decay at or below this are treated as silent.
inline constexpr double kMinAudibleDecaySeconds = 1e-3;

/// Band edges (13 values) for the given sample rate: log-spaced from
/// 31.25 Hz to min(16 kHz, Nyquist).
std::array<double, ReverbParams::kBands + 1> reverb_band_edges(int sample_rate);

/// IR length in samples: clamp(ceil(1.2 * max_decay * sr), sr / 10, 10 * sr).
std::size_t reverb_ir_length(const ReverbParams& params, int sample_rate);

/// Noise-shaped impulse response. Each channel gets an independent noise
/// stream derived from `seed`; every channel is scaled to unit L2 norm, or
/// left all-zero when no band is audible. Deterministic in all arguments.
AudioBuffer render_reverb_ir(const ReverbParams& params, int sample_rate, std::uint64_t seed,
                             std::size_t channels = 1);

struct ReverbOutput {
  AudioBuffer audio;
  bool peak_limited = false;  // true when a uniform rescale was applied
  double limiter_gain = 1.0;
};

/// y = (1 - mix) x + mix (x * h), truncated to the input length; rescaled
/// uniformly across channels only if some |y| would exceed 1.
ReverbOutput apply_reverb(const AudioBuffer& audio, const ReverbParams& params, std::uint64_t seed);

}  // namespace textfx::fx
