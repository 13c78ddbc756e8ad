#include "textfx/fx/biquad.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace textfx::fx {
namespace {

Biquad normalize(double b0, double b1, double b2, double a0, double a1, double a2) {
  return {b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0};
}

}  // namespace

Biquad design_peaking(double sample_rate, double center_hz, double gain_db, double q) {
  const double A = std::pow(10.0, gain_db / 40.0);
  const double w0 = 2.0 * std::numbers::pi * center_hz / sample_rate;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / (2.0 * q);
  return normalize(1.0 + alpha * A, -2.0 * cw, 1.0 - alpha * A,
                   1.0 + alpha / A, -2.0 * cw, 1.0 - alpha / A);
}

Biquad design_low_shelf(double sample_rate, double cutoff_hz, double gain_db, double q) {
  const double A = std::pow(10.0, gain_db / 40.0);
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / (2.0 * q);
  const double k = 2.0 * std::sqrt(A) * alpha;
  return normalize(A * ((A + 1.0) - (A - 1.0) * cw + k),
                   2.0 * A * ((A - 1.0) - (A + 1.0) * cw),
                   A * ((A + 1.0) - (A - 1.0) * cw - k),
                   (A + 1.0) + (A - 1.0) * cw + k,
                   -2.0 * ((A - 1.0) + (A + 1.0) * cw),
                   (A + 1.0) + (A - 1.0) * cw - k);
}

Biquad design_high_shelf(double sample_rate, double cutoff_hz, double gain_db, double q) {
  const double A = std::pow(10.0, gain_db / 40.0);
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / (2.0 * q);
  const double k = 2.0 * std::sqrt(A) * alpha;
  return normalize(A * ((A + 1.0) + (A - 1.0) * cw + k),
                   -2.0 * A * ((A - 1.0) + (A + 1.0) * cw),
                   A * ((A + 1.0) + (A - 1.0) * cw - k),
                   (A + 1.0) - (A - 1.0) * cw + k,
                   2.0 * ((A - 1.0) - (A + 1.0) * cw),
                   (A + 1.0) - (A - 1.0) * cw - k);
}

double magnitude_db(const Biquad& s, double freq_hz, double sample_rate) {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  const auto num = s.b0 + s.b1 * z1 + s.b2 * z2;
  const auto den = 1.0 + s.a1 * z1 + s.a2 * z2;
  return 20.0 * std::log10(std::abs(num) / std::abs(den));
}

double cascade_magnitude_db(std::span<const Biquad> sections, double freq_hz, double sample_rate) {
  double total = 0.0;
  for (const auto& s : sections) total += magnitude_db(s, freq_hz, sample_rate);
  return total;
}

void process_cascade(std::span<const Biquad> sections, std::span<float> samples) {
  if (sections.empty()) return;
  struct State {
    double z1 = 0.0, z2 = 0.0;
  };
  std::vector<State> state(sections.size());
  for (float& sample : samples) {
    double v = sample;
    for (std::size_t k = 0; k < sections.size(); ++k) {
      const Biquad& s = sections[k];
      State& st = state[k];
      const double y = s.b0 * v + st.z1;
      st.z1 = s.b1 * v - s.a1 * y + st.z2;
      st.z2 = s.b2 * v - s.a2 * y;
      v = y;
    }
    sample = static_cast<float>(v);
  }
}

}  // namespace textfx::fx
