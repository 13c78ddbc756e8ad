#pragma once

#include <span>
#include <vector>

namespace textfx::fx {

/// Normalized second-order section (a0 == 1):
///   y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// RBJ audio-EQ-cookbook designs. Q sets the bandwidth for peaking sections
// and the transition slope for shelves (alpha = sin(w0) / (2Q) in both).
Biquad design_peaking(double sample_rate, double center_hz, double gain_db, double q);
Biquad design_low_shelf(double sample_rate, double cutoff_hz, double gain_db, double q);
Biquad design_high_shelf(double sample_rate, double cutoff_hz, double gain_db, double q);

/// |H(e^{jw})| in dB at frequency f.
double magnitude_db(const Biquad& s, double freq_hz, double sample_rate);
double cascade_magnitude_db(std::span<const Biquad> sections, double freq_hz, double sample_rate);

/// Runs the cascade over one channel in place (transposed direct form II,
/// double-precision state, zero initial conditions).
void process_cascade(std::span<const Biquad> sections, std::span<float> samples);

}  // namespace textfx::fx
