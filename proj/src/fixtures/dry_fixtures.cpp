#include "textfx/fixtures/dry_fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "textfx/core/random.hpp"

namespace textfx::fixtures {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr float kTargetPeak = 0.5f;

double midi_to_hz(int note) { return 440.0 * std::pow(2.0, (note - 69) / 12.0); }

// One-pole DC blocker with a 10 Hz corner; recorded clips carry no
// sub-audio content, and effects disagree most where nothing is audible.
void remove_dc(std::vector<float>& x, int sr) {
  const double r = std::exp(-kTwoPi * 10.0 / sr);
  double prev_x = 0.0, prev_y = 0.0;
  for (float& v : x) {
    const double y = v - prev_x + r * prev_y;
    prev_x = v;
    prev_y = y;
    v = static_cast<float>(y);
  }
}

void normalize_peak(std::vector<float>& x) {
  float peak = 0.0f;
  for (float v : x) peak = std::max(peak, std::fabs(v));
  if (peak <= 0.0f) return;
  const float g = kTargetPeak / peak;
  for (float& v : x) v *= g;
}

// Karplus-Strong plucked string added into `out` starting at `start`.
void pluck(std::vector<float>& out, int sr, std::size_t start, double freq, double amp, Rng& rng) {
  const auto period = std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(sr / freq)));
  std::vector<double> line(period);
  for (double& v : line) v = rng.uniform(-1.0, 1.0);
  // Soften the excitation (a pick rather than a wire brush).
  for (int pass = 0; pass < 3; ++pass)
    for (std::size_t i = 1; i < period; ++i) line[i] = 0.5 * (line[i] + line[i - 1]);
  // The string loop keeps the excitation mean as a slowly decaying offset.
  double mean = 0.0;
  for (double v : line) mean += v;
  mean /= static_cast<double>(period);
  for (double& v : line) v -= mean;
  const std::size_t length = std::min(out.size() - start, static_cast<std::size_t>(2.5 * sr));
  const double damping = 0.996;
  std::size_t idx = 0;
  for (std::size_t n = 0; n < length; ++n) {
    const std::size_t next = (idx + 1) % period;
    const double y = line[idx];
    line[idx] = damping * 0.5 * (line[idx] + line[next]);
    idx = next;
    out[start + n] += static_cast<float>(amp * y);
  }
}

std::vector<float> guitar(int sr, std::size_t frames) {
  std::vector<float> out(frames, 0.0f);
  Rng rng(0x6017a5);
  // C, G, Am, F arpeggios, one note every 250 ms.
  const int chords[4][4] = {{48, 55, 60, 64}, {43, 50, 55, 59}, {45, 52, 57, 60}, {41, 48, 53, 57}};
  const auto step = static_cast<std::size_t>(0.25 * sr);
  std::size_t t = 0;
  for (int i = 0; t < frames; ++i, t += step) {
    const int note = chords[(i / 8) % 4][i % 4];
    const double amp = (i % 4 == 0) ? 0.9 : 0.6;
    pluck(out, sr, t, midi_to_hz(note), amp, rng);
  }
  return out;
}

std::vector<float> drums(int sr, std::size_t frames) {
  std::vector<float> out(frames, 0.0f);
  Rng rng(0xd7c3);
  const double beat = 0.6;  // 100 BPM
  auto add = [&](std::size_t start, double seconds, auto&& voice) {
    const auto len = std::min(frames - start, static_cast<std::size_t>(seconds * sr));
    for (std::size_t n = 0; n < len; ++n)
      out[start + n] += static_cast<float>(voice(static_cast<double>(n) / sr));
  };
  for (int eighth = 0;; ++eighth) {
    const auto start = static_cast<std::size_t>(eighth * beat * 0.5 * sr);
    if (start >= frames) break;
    const int pos = eighth % 8;
    if (pos == 0 || pos == 4) {
      double phase = 0.0;
      add(start, 0.5, [&](double t) {
        const double f = 50.0 + 70.0 * std::exp(-t / 0.04);
        phase += kTwoPi * f / sr;
        return 0.9 * std::sin(phase) * std::exp(-t / 0.25);
      });
    }
    if (pos == 2 || pos == 6) {
      double lp = 0.0;
      add(start, 0.3, [&](double t) {
        lp += 0.35 * (rng.uniform(-1.0, 1.0) - lp);
        return 1.2 * lp * std::exp(-t / 0.12) +
               0.35 * std::sin(kTwoPi * 190.0 * t) * std::exp(-t / 0.08);
      });
    }
    double prev = 0.0;
    add(start, 0.1, [&](double t) {
      const double w = rng.uniform(-1.0, 1.0);
      const double hp = w - prev;
      prev = w;
      return 0.06 * hp * std::exp(-t / 0.03);
    });
  }
  return out;
}

std::vector<float> piano(int sr, std::size_t frames) {
  std::vector<float> out(frames, 0.0f);
  const int melody[] = {60, 64, 67, 72, 71, 67, 64, 62, 60, 65, 69, 72, 74, 71, 67, 55};
  const auto step = static_cast<std::size_t>(0.5 * sr);
  const double inharmonicity = 2e-4;
  std::size_t t = 0;
  for (int i = 0; t < frames; ++i, t += step) {
    const double f0 = midi_to_hz(melody[i % 16]);
    const double amp = (i % 4 == 0) ? 0.8 : 0.55;
    const auto len = std::min(frames - t, static_cast<std::size_t>(3.0 * sr));
    for (int h = 1; h <= 8; ++h) {
      const double fh = h * f0 * std::sqrt(1.0 + inharmonicity * h * h);
      if (fh >= 0.45 * sr) break;
      const double a = amp / std::pow(h, 1.2);
      const double rate = 0.8 + 0.6 * h;
      // Damped oscillator by complex rotation: z[n] = exp((-rate + i 2 pi fh) n / sr).
      const std::complex<double> step_z = std::exp(std::complex<double>(-rate, kTwoPi * fh) / double(sr));
      std::complex<double> z{1.0, 0.0};
      const double attack_len = 0.004 * sr;
      for (std::size_t n = 0; n < len; ++n) {
        const double attack = std::min(1.0, static_cast<double>(n) / attack_len);
        out[t + n] += static_cast<float>(a * attack * z.imag());
        z *= step_z;
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Instrument i) noexcept {
  switch (i) {
    case Instrument::Drums: return "drums";
    case Instrument::Guitar: return "guitar";
    case Instrument::Piano: return "piano";
  }
  return "unknown";
}

std::optional<Instrument> parse_instrument(std::string_view name) noexcept {
  for (Instrument i : kAllInstruments)
    if (to_string(i) == name) return i;
  return std::nullopt;
}

double default_duration_seconds(Instrument i) noexcept {
  switch (i) {
    case Instrument::Drums: return 15.0;
    case Instrument::Guitar: return 10.0;
    case Instrument::Piano: return 20.0;
  }
  return 10.0;
}

AudioBuffer synthesize_dry(Instrument instrument, int sample_rate, double duration_seconds) {
  if (duration_seconds <= 0.0) duration_seconds = default_duration_seconds(instrument);
  const auto frames = static_cast<std::size_t>(std::lround(duration_seconds * sample_rate));
  if (frames == 0) fail(ErrorCode::InvalidArgument, "fixture duration too short");
  std::vector<float> x;
  switch (instrument) {
    case Instrument::Drums: x = drums(sample_rate, frames); break;
    case Instrument::Guitar: x = guitar(sample_rate, frames); break;
    case Instrument::Piano: x = piano(sample_rate, frames); break;
  }
  remove_dc(x, sample_rate);
  normalize_peak(x);
  return AudioBuffer::mono(sample_rate, std::move(x));
}

}  // namespace textfx::fixtures
