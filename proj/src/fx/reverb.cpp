#include "textfx/fx/reverb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "textfx/core/fft.hpp"
#include "textfx/core/random.hpp"
#include "textfx/simd/kernels.hpp"

namespace textfx::fx {

std::array<double, ReverbParams::kBands + 1> reverb_band_edges(int sample_rate) {
  const double hi = std::min(kReverbHighEdgeHz, 0.5 * sample_rate);
  std::array<double, ReverbParams::kBands + 1> edges{};
  for (std::size_t j = 0; j < edges.size(); ++j)
    edges[j] = kReverbLowEdgeHz * std::pow(hi / kReverbLowEdgeHz,
                                           static_cast<double>(j) / ReverbParams::kBands);
  return edges;
}

std::size_t reverb_ir_length(const ReverbParams& params, int sample_rate) {
  const double max_decay = *std::max_element(params.band_decay.begin(), params.band_decay.end());
  const double raw = std::ceil(1.2 * max_decay * sample_rate);
  const double lo = std::ceil(sample_rate / 10.0);
  const double hi = 10.0 * sample_rate;
  return static_cast<std::size_t>(std::clamp(raw, lo, hi));
}

AudioBuffer render_reverb_ir(const ReverbParams& params, int sample_rate, std::uint64_t seed,
                             std::size_t channels) {
  validate(params);
  const std::size_t length = reverb_ir_length(params, sample_rate);
  AudioBuffer ir(sample_rate, channels, length);

  bool any_audible = false;
  for (std::size_t b = 0; b < ReverbParams::kBands; ++b)
    any_audible |= params.band_gain[b] > 0.0 && params.band_decay[b] > kMinAudibleDecaySeconds;
  if (!any_audible) return ir;

  const std::size_t nfft = fft::next_fast_size(length);
  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(nfft);
  const auto edges = reverb_band_edges(sample_rate);
  const auto& k = simd::active_kernels();

  std::vector<double> env(length);
  for (std::size_t c = 0; c < channels; ++c) {
    Rng rng(derive_seed(seed, c));
    std::vector<double> noise(nfft);
    for (double& v : noise) v = rng.normal();
    const auto spectrum = fft::rfft(noise);

    std::vector<double> acc(length, 0.0);
    std::vector<std::complex<double>> masked(spectrum.size());
    for (std::size_t b = 0; b < ReverbParams::kBands; ++b) {
      const double gain = params.band_gain[b];
      const double decay = params.band_decay[b];
      if (gain <= 0.0 || decay <= kMinAudibleDecaySeconds) continue;

      // Band b owns bins with edges[b] <= f < edges[b+1]; the top band also
      // takes a bin landing exactly on the upper edge.
      const bool last = b + 1 == ReverbParams::kBands;
      for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double f = static_cast<double>(i) * bin_hz;
        const bool inside = f >= edges[b] && (f < edges[b + 1] || (last && f <= edges[b + 1]));
        masked[i] = inside ? spectrum[i] : std::complex<double>{};
      }
      const auto band = fft::irfft(masked, nfft);

      // 60 dB amplitude decay after `decay` seconds.
      const double ratio = std::pow(10.0, -3.0 / (decay * sample_rate));
      double e = 1.0;
      for (std::size_t t = 0; t < length; ++t) {
        env[t] = e;
        e *= ratio;
      }
      k.accumulate_enveloped(acc.data(), band.data(), env.data(), gain, length);
    }

    double energy = 0.0;
    for (double v : acc) energy += v * v;
    if (energy <= 0.0) continue;
    const double norm = 1.0 / std::sqrt(energy);
    auto out = ir.channel(c);
    for (std::size_t t = 0; t < length; ++t) out[t] = static_cast<float>(acc[t] * norm);
  }
  return ir;
}

ReverbOutput apply_reverb(const AudioBuffer& audio, const ReverbParams& params, std::uint64_t seed) {
  validate(params);
  ReverbOutput result{audio, false, 1.0};
  if (params.mix == 0.0) return result;

  const auto& k = simd::active_kernels();
  const AudioBuffer ir = render_reverb_ir(params, audio.sample_rate(), seed, audio.channels());
  const auto dry_gain = static_cast<float>(1.0 - params.mix);
  const auto wet_gain = static_cast<float>(params.mix);
  const std::size_t n = audio.frames();

  double peak = 0.0;
  std::vector<float> wet_f(n);
  for (std::size_t c = 0; c < audio.channels(); ++c) {
    const auto h_f = ir.channel(c);
    std::vector<double> h(h_f.begin(), h_f.end());
    const auto wet = fft::convolve(audio.channel(c), h, n);
    std::transform(wet.begin(), wet.end(), wet_f.begin(),
                   [](double v) { return static_cast<float>(v); });
    auto out = result.audio.channel(c);
    k.axpby(out.data(), audio.channel(c).data(), wet_f.data(), dry_gain, wet_gain, n);
    peak = std::max(peak, k.abs_stats(out.data(), n).max_abs);
  }

  if (peak > 1.0) {
    // Largest float gain that maps the peak sample to at most 1.0f.
    const auto peak_f = static_cast<float>(peak);
    auto gain = static_cast<float>(1.0 / peak);
    while (peak_f * gain > 1.0f) gain = std::nextafter(gain, 0.0f);
    result.peak_limited = true;
    result.limiter_gain = gain;
    for (std::size_t c = 0; c < result.audio.channels(); ++c) {
      auto out = result.audio.channel(c);
      k.scale(out.data(), gain, n);
    }
  }
  return result;
}

}  // namespace textfx::fx
