#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "textfx/core/error.hpp"

namespace textfx {

inline constexpr int kMinSampleRate = 8000;

/// Planar multichannel audio. Samples are nominally in [-1, 1]; nothing
/// enforces that range, but the WAV writer clips on 16-bit export.
class AudioBuffer {
 public:
  AudioBuffer() = default;

  /// Zero-filled buffer; throws InvalidAudio on bad shape.
  AudioBuffer(int sample_rate, std::size_t channels, std::size_t frames);

  /// Takes ownership of per-channel sample vectors (all must share one length).
  AudioBuffer(int sample_rate, std::vector<std::vector<float>> channels);

  static AudioBuffer mono(int sample_rate, std::vector<float> samples);

  int sample_rate() const noexcept { return sample_rate_; }
  std::size_t channels() const noexcept { return data_.size(); }
  std::size_t frames() const noexcept { return data_.empty() ? 0 : data_.front().size(); }
  bool empty() const noexcept { return frames() == 0; }

  std::span<float> channel(std::size_t c) { return data_.at(c); }
  std::span<const float> channel(std::size_t c) const { return data_.at(c); }

  /// Channel average; returns a copy even for mono input.
  std::vector<float> mixdown() const;

  double duration_seconds() const noexcept {
    return sample_rate_ > 0 ? static_cast<double>(frames()) / sample_rate_ : 0.0;
  }

  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;

 private:
  void check_invariants() const;

  int sample_rate_ = 0;
  std::vector<std::vector<float>> data_;
};

}  // namespace textfx
