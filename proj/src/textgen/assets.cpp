// Reference implementations handed to the model as DSP-function context.
// They describe the same processors as the C++ effects, in the vocabulary
// (numpy/scipy) a language model is most familiar with.

#include <string_view>

#include "textfx/textgen/prompt.hpp"

namespace textfx::textgen {
namespace {

constexpr std::string_view kReverbSource = R"PY(import numpy as np
import math
import scipy.signal
from scipy.fft import rfft, irfft
from functools import partial

def noise_shaped_reverberation(
    x,  # Shape: (channels, seq_len)
    sample_rate,
    band0_gain,
    band1_gain,
    band2_gain,
    band3_gain,
    band4_gain,
    band5_gain,
    band6_gain,
    band7_gain,
    band8_gain,
    band9_gain,
    band10_gain,
    band11_gain,
    band0_decay,
    band1_decay,
    band2_decay,
    band3_decay,
    band4_decay,
    band5_decay,
    band6_decay,
    band7_decay,
    band8_decay,
    band9_decay,
    band10_decay,
    band11_decay,
    mix,
    seed=0,
):
    # Gains are linear in [0, 1]; decays are per-band RT60 times in seconds.
    gains = np.array([band0_gain, band1_gain, band2_gain, band3_gain,
                      band4_gain, band5_gain, band6_gain, band7_gain,
                      band8_gain, band9_gain, band10_gain, band11_gain])
    decays = np.array([band0_decay, band1_decay, band2_decay, band3_decay,
                       band4_decay, band5_decay, band6_decay, band7_decay,
                       band8_decay, band9_decay, band10_decay, band11_decay])
    num_bands = 12
    edges = np.geomspace(31.25, min(16000.0, sample_rate / 2), num_bands + 1)

    ir_len = int(math.ceil(1.2 * decays.max() * sample_rate))
    ir_len = min(max(ir_len, int(math.ceil(sample_rate / 10))), 10 * sample_rate)
    n_fft = scipy.fft.next_fast_len(ir_len)
    freqs = np.arange(n_fft // 2 + 1) * sample_rate / n_fft
    t = np.arange(ir_len) / sample_rate

    channels, seq_len = x.shape
    rng = np.random.default_rng(seed)
    ir = np.zeros((channels, ir_len))
    for c in range(channels):
        spectrum = rfft(rng.standard_normal(n_fft))
        for b in range(num_bands):
            if gains[b] <= 0.0 or decays[b] <= 1e-3:
                continue
            upper = freqs <= edges[b + 1] if b == num_bands - 1 else freqs < edges[b + 1]
            mask = (freqs >= edges[b]) & upper
            band = irfft(spectrum * mask, n=n_fft)[:ir_len]
            envelope = 10.0 ** (-3.0 * t / decays[b])
            ir[c] += gains[b] * band * envelope
        norm = np.linalg.norm(ir[c])
        if norm > 0.0:
            ir[c] /= norm

    convolve = partial(scipy.signal.fftconvolve, mode="full")
    wet = np.stack([convolve(x[c], ir[c])[:seq_len] for c in range(channels)])
    y = (1.0 - mix) * x + mix * wet
    peak = np.abs(y).max()
    if peak > 1.0:
        y = y / peak
    return y)PY";

constexpr std::string_view kEqSource = R"PY(import numpy as np
import math
import scipy.signal

def _peaking(gain_db, cutoff_freq, q, sample_rate):
    a = 10.0 ** (gain_db / 40.0)
    w0 = 2.0 * math.pi * cutoff_freq / sample_rate
    alpha = math.sin(w0) / (2.0 * q)
    b = [1.0 + alpha * a, -2.0 * math.cos(w0), 1.0 - alpha * a]
    den = [1.0 + alpha / a, -2.0 * math.cos(w0), 1.0 - alpha / a]
    return np.array(b) / den[0], np.array(den) / den[0]

def _shelf(gain_db, cutoff_freq, q, sample_rate, high):
    a = 10.0 ** (gain_db / 40.0)
    w0 = 2.0 * math.pi * cutoff_freq / sample_rate
    cw = math.cos(w0)
    alpha = math.sin(w0) / (2.0 * q)
    k = 2.0 * math.sqrt(a) * alpha
    s = -1.0 if high else 1.0
    b = [a * ((a + 1) - s * (a - 1) * cw + k),
         s * 2 * a * ((a - 1) - s * (a + 1) * cw),
         a * ((a + 1) - s * (a - 1) * cw - k)]
    den = [(a + 1) + s * (a - 1) * cw + k,
           -s * 2 * ((a - 1) + s * (a + 1) * cw),
           (a + 1) + s * (a - 1) * cw - k]
    return np.array(b) / den[0], np.array(den) / den[0]

def parametric_eq(
    x,  # Shape: (channels, seq_len)
    sample_rate,
    low_shelf_gain_db,
    low_shelf_cutoff_freq,
    low_shelf_q,
    band1_gain_db,
    band1_cutoff_freq,
    band1_q,
    band2_gain_db,
    band2_cutoff_freq,
    band2_q,
    band3_gain_db,
    band3_cutoff_freq,
    band3_q,
    band4_gain_db,
    band4_cutoff_freq,
    band4_q,
    high_shelf_gain_db,
    high_shelf_cutoff_freq,
    high_shelf_q,
):
    # Gains in dB within [-24, 24]; cutoffs in Hz; q within [0.1, 10].
    peaks = sorted([
        (band1_gain_db, band1_cutoff_freq, band1_q),
        (band2_gain_db, band2_cutoff_freq, band2_q),
        (band3_gain_db, band3_cutoff_freq, band3_q),
        (band4_gain_db, band4_cutoff_freq, band4_q),
    ], key=lambda band: band[1])
    sections = [_shelf(low_shelf_gain_db, low_shelf_cutoff_freq, low_shelf_q, sample_rate, False)]
    sections += [_peaking(g, f, q, sample_rate) for g, f, q in peaks]
    sections.append(_shelf(high_shelf_gain_db, high_shelf_cutoff_freq, high_shelf_q, sample_rate, True))

    y = np.asarray(x, dtype=np.float64)
    for b, a in sections:
        y = scipy.signal.lfilter(b, a, y, axis=-1)
    return y)PY";

}  // namespace

std::string_view code_asset(fx::FxType fx) { return fx == fx::FxType::Eq ? kEqSource : kReverbSource; }

}  // namespace textfx::textgen
