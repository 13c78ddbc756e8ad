#include "textfx/core/audio_buffer.hpp"

#include <string>

namespace textfx {

AudioBuffer::AudioBuffer(int sample_rate, std::size_t channels, std::size_t frames)
    : sample_rate_(sample_rate), data_(channels, std::vector<float>(frames, 0.0f)) {
  check_invariants();
}

AudioBuffer::AudioBuffer(int sample_rate, std::vector<std::vector<float>> channels)
    : sample_rate_(sample_rate), data_(std::move(channels)) {
  check_invariants();
}

AudioBuffer AudioBuffer::mono(int sample_rate, std::vector<float> samples) {
  std::vector<std::vector<float>> ch;
  ch.push_back(std::move(samples));
  return AudioBuffer(sample_rate, std::move(ch));
}

std::vector<float> AudioBuffer::mixdown() const {
  if (data_.size() == 1) return data_.front();
  std::vector<float> out(frames(), 0.0f);
  const double inv = 1.0 / static_cast<double>(data_.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    double acc = 0.0;
    for (const auto& ch : data_) acc += ch[n];
    out[n] = static_cast<float>(acc * inv);
  }
  return out;
}

void AudioBuffer::check_invariants() const {
  if (sample_rate_ < kMinSampleRate)
    fail(ErrorCode::InvalidAudio, "sample_rate must be >= 8000, got " + std::to_string(sample_rate_));
  if (data_.empty() || data_.size() > 2)
    fail(ErrorCode::InvalidAudio, "channel count must be 1 or 2, got " + std::to_string(data_.size()));
  const std::size_t n = data_.front().size();
  if (n == 0) fail(ErrorCode::InvalidAudio, "audio must contain at least one frame");
  for (const auto& ch : data_)
    if (ch.size() != n) fail(ErrorCode::InvalidAudio, "channels have unequal lengths");
}

}  // namespace textfx
