#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace textfx::fft {

/// Smallest n' >= n whose only prime factors are 2, 3, 5 and 7.
std::size_t next_fast_size(std::size_t n);

/// Real forward transform; returns bins 0..n/2 (unnormalized).
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Magnitudes |X[k]| for k = 0..n/2 of the real FFT of x.
std::vector<double> rfft_magnitude(std::span<const float> x);

/// Inverse of rfft for a length-n signal, normalized by 1/n.
std::vector<double> irfft(std::span<const std::complex<double>> bins, std::size_t n);

/// Linear convolution x * h, truncated to the first out_len samples.
std::vector<double> convolve(std::span<const float> x, std::span<const double> h,
                             std::size_t out_len);

}  // namespace textfx::fft
