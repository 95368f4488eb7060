#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zsonify/audio_buffer.hpp"

namespace zsonify::dsp {

/// Time-varying filters update their coefficients once per control block.
inline constexpr std::size_t kControlBlockSize = 64;

/// Number of control blocks needed to cover n samples.
inline std::size_t control_blocks(std::size_t n) {
    return (n + kControlBlockSize - 1) / kControlBlockSize;
}

/// lo + x * (hi - lo) for x in [0, 1]. Descending maps (lo > hi) are fine.
/// Endpoints are returned exactly.
double lin_map(double x, double lo, double hi);

/// Geometric interpolation lo * (hi/lo)^x for x in [0, 1]; both endpoints
/// must be positive and are returned exactly.
double exp_map(double x, double lo, double hi);

/// 10^(db/20).
double db_to_linear(double db);

/// Exponential decay envelope; release is the time to fall by 60 dB.
struct EnvelopeSpec {
    double release_s = 1.0;
};

/// e(t) = exp(-t * ln(1000) / release), so e(0) = 1 and e(release) = 0.001.
std::vector<double> exp_envelope(const EnvelopeSpec& spec, std::size_t n, int sample_rate);

/// amp * e(t) * sin(2*pi*freq*t), zero initial phase.
/// freq must lie in (0, sample_rate/2).
std::vector<double> render_sine(double freq_hz, double amp, const EnvelopeSpec& env,
                                double duration_s, int sample_rate);

/// Frequency modulation with peak deviation d and index d / modulator:
/// amp * e(t) * sin(2*pi*carrier*t + (d/fm) * sin(2*pi*fm*t)).
/// deviation = 0 reproduces render_sine bit for bit.
std::vector<double> render_fm(double carrier_hz, double modulator_hz, double deviation_hz,
                              double amp, const EnvelopeSpec& env, double duration_s,
                              int sample_rate);

/// Seeded uniform noise in [-1, 1]; the same seed always yields the same
/// sequence on every platform (xoshiro256++ underneath).
std::vector<double> white_noise(std::uint64_t seed, std::size_t n);

/// Two-pole resonant bandpass with constant peak gain at the center
/// frequency. center_hz and inv_q hold one value per control block;
/// coefficients are recomputed at block boundaries. At steady state the
/// -3 dB bandwidth is about center * inv_q.
std::vector<double> resonant_bandpass(std::span<const double> input,
                                      std::span<const double> center_hz,
                                      std::span<const double> inv_q, int sample_rate);

/// Constant-power pan: L = x*cos(p*pi/2), R = x*sin(p*pi/2).
/// position 0 is full left, 1 full right.
StereoPair pan(std::span<const double> mono, double position);

} // namespace zsonify::dsp
