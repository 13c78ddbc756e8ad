#pragma once

#include <vector>

#include "textfx/fx/params.hpp"

namespace textfx::dataset {

inline constexpr std::size_t kFitFrequencies = 128;
inline constexpr std::size_t kFitIterations = 200;

struct FitResult {
  fx::EqParams params;
  double residual_rms_db = 0.0;
  std::size_t iterations = 0;
};

/// 128 log-spaced evaluation frequencies from 20 Hz to min(20 kHz, 0.45 sr).
std::vector<double> fit_frequencies(int sample_rate = fx::kNominalSampleRate);

/// Least-squares fit of the six-band parametric response (dB) to a target
/// response at fit_frequencies(). Damped Gauss-Newton (Levenberg-Marquardt)
/// on (gain dB, log cutoff, log q) per band, forward-difference Jacobian,
/// at most 200 iterations. Starts from the default layout: flat gains,
/// shelves at 120 Hz and 6 kHz, peaks at 262.4/573.9/1255.2/2745.3 Hz.
FitResult fit_parametric_response(const std::vector<double>& target_db, int sample_rate = fx::kNominalSampleRate);

/// Fits the 40-band graphic curve; never throws on valid input.
FitResult fit_parametric_from_graphic(const fx::GraphicEqParams& g, int sample_rate = fx::kNominalSampleRate);

}  // namespace textfx::dataset
