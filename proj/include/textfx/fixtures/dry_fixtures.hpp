#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "textfx/core/audio_buffer.hpp"

namespace textfx::fixtures {

enum class Instrument { Drums, Guitar, Piano };

inline constexpr std::array<Instrument, 3> kAllInstruments{Instrument::Drums, Instrument::Guitar,
                                                           Instrument::Piano};

std::string_view to_string(Instrument i) noexcept;
std::optional<Instrument> parse_instrument(std::string_view name) noexcept;

/// Nominal clip length: guitar 10 s, drums 15 s, piano 20 s.
double default_duration_seconds(Instrument i) noexcept;

/// Deterministic synthesized dry clip (mono, peak 0.5). A non-positive
/// duration selects the nominal length.
AudioBuffer synthesize_dry(Instrument instrument, int sample_rate = 44100,
                           double duration_seconds = 0.0);

}  // namespace textfx::fixtures
