#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "textfx/core/audio_buffer.hpp"

namespace textfx::wav {

enum class SampleFormat { Pcm16, Float32 };

struct WavFile {
  AudioBuffer audio;
  SampleFormat format = SampleFormat::Pcm16;
};

/// Parses RIFF/WAVE bytes (PCM 16-bit or IEEE float 32-bit, 1-2 channels,
/// WAVE_FORMAT_EXTENSIBLE accepted). Throws SchemaError on anything else.
WavFile decode(const std::vector<std::uint8_t>& bytes);
WavFile read(const std::filesystem::path& path);

/// 16-bit output is scaled by 32768, rounded, and clipped to the int16 range.
std::vector<std::uint8_t> encode(const AudioBuffer& audio, SampleFormat format);
void write(const std::filesystem::path& path, const AudioBuffer& audio, SampleFormat format);

}  // namespace textfx::wav
