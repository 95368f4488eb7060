#include "zsonify/dsp.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zsonify::dsp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDecay60dB = 6.907755278982137; // ln(1000)

void require_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::invalid_argument(std::string(what) + ": value outside [0, 1]");
}

// xoshiro256++ (Blackman & Vigna), state seeded through splitmix64; the
// output stream is fully specified, unlike std::random distributions.
struct Xoshiro256pp {
    std::array<std::uint64_t, 4> s{};

    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : s) {
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
};

std::size_t duration_to_samples(double duration_s, int sample_rate) {
    if (!(duration_s >= 0.0)) throw std::invalid_argument("duration must be non-negative");
    if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

// Shared oscillator core; index 0 renders a plain sine through the exact
// same arithmetic, so the FM degenerate case is bit-identical.
std::vector<double> render_osc(double carrier_hz, double modulator_hz, double index,
                               double amp, const EnvelopeSpec& env, double duration_s,
                               int sample_rate) {
    if (!(carrier_hz > 0.0) || carrier_hz >= sample_rate / 2.0)
        throw std::invalid_argument("oscillator frequency outside (0, Nyquist)");
    if (!(env.release_s > 0.0)) throw std::invalid_argument("release must be positive");

    const std::size_t n = duration_to_samples(duration_s, sample_rate);
    std::vector<double> out(n);
    const double w = 2.0 * kPi * carrier_hz / sample_rate;
    const double k = std::exp(-kDecay60dB / (env.release_s * sample_rate));
    double e = 1.0;
    if (index == 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = amp * e * std::sin(w * static_cast<double>(i));
            e *= k;
        }
    } else {
        const double wm = 2.0 * kPi * modulator_hz / sample_rate;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i);
            out[i] = amp * e * std::sin(w * t + index * std::sin(wm * t));
            e *= k;
        }
    }
    return out;
}

} // namespace

double lin_map(double x, double lo, double hi) {
    require_unit(x, "lin_map");
    if (x == 0.0) return lo;
    if (x == 1.0) return hi;
    return lo + x * (hi - lo);
}

double exp_map(double x, double lo, double hi) {
    require_unit(x, "exp_map");
    if (!(lo > 0.0) || !(hi > 0.0))
        throw std::invalid_argument("exp_map: endpoints must be positive");
    if (x == 0.0) return lo;
    if (x == 1.0) return hi;
    return lo * std::pow(hi / lo, x);
}

double db_to_linear(double db) { return std::pow(10.0, db / 20.0); }

std::vector<double> exp_envelope(const EnvelopeSpec& spec, std::size_t n, int sample_rate) {
    if (!(spec.release_s > 0.0)) throw std::invalid_argument("release must be positive");
    if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
    std::vector<double> out(n);
    const double k = std::exp(-kDecay60dB / (spec.release_s * sample_rate));
    double e = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = e;
        e *= k;
    }
    return out;
}

std::vector<double> render_sine(double freq_hz, double amp, const EnvelopeSpec& env,
                                double duration_s, int sample_rate) {
    return render_osc(freq_hz, 0.0, 0.0, amp, env, duration_s, sample_rate);
}

std::vector<double> render_fm(double carrier_hz, double modulator_hz, double deviation_hz,
                              double amp, const EnvelopeSpec& env, double duration_s,
                              int sample_rate) {
    if (deviation_hz < 0.0) throw std::invalid_argument("render_fm: negative deviation");
    double index = 0.0;
    if (deviation_hz > 0.0) {
        if (!(modulator_hz > 0.0))
            throw std::invalid_argument("render_fm: deviation without a modulator");
        index = deviation_hz / modulator_hz;
    }
    return render_osc(carrier_hz, modulator_hz, index, amp, env, duration_s, sample_rate);
}

std::vector<double> white_noise(std::uint64_t seed, std::size_t n) {
    Xoshiro256pp rng(seed);
    std::vector<double> out(n);
    for (auto& v : out)
        v = 2.0 * (static_cast<double>(rng.next() >> 11) * 0x1.0p-53) - 1.0;
    return out;
}

std::vector<double> resonant_bandpass(std::span<const double> input,
                                      std::span<const double> center_hz,
                                      std::span<const double> inv_q, int sample_rate) {
    if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
    const std::size_t blocks = control_blocks(input.size());
    if (center_hz.size() != blocks || inv_q.size() != blocks)
        throw std::invalid_argument("resonant_bandpass: need one control value per block");

    std::vector<double> out(input.size());
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const double f = center_hz[b];
        const double iq = inv_q[b];
        if (!(f > 0.0) || f >= sample_rate / 2.0)
            throw std::invalid_argument("resonant_bandpass: center outside (0, Nyquist)");
        if (!(iq > 0.0)) throw std::invalid_argument("resonant_bandpass: 1/Q must be positive");

        // RBJ constant-peak-gain bandpass, b1 = 0, b2 = -b0.
        const double w0 = 2.0 * kPi * f / sample_rate;
        const double alpha = std::sin(w0) * iq * 0.5;
        const double a0_inv = 1.0 / (1.0 + alpha);
        const double b0 = alpha * a0_inv;
        const double a1 = -2.0 * std::cos(w0) * a0_inv;
        const double a2 = (1.0 - alpha) * a0_inv;

        const std::size_t begin = b * kControlBlockSize;
        const std::size_t end = std::min(begin + kControlBlockSize, input.size());
        for (std::size_t i = begin; i < end; ++i) {
            const double x = input[i];
            const double y = b0 * x + s1;
            s1 = -a1 * y + s2;
            s2 = -b0 * x - a2 * y;
            out[i] = y;
        }
    }
    return out;
}

StereoPair pan(std::span<const double> mono, double position) {
    require_unit(position, "pan");
    const double gl = std::cos(position * kPi / 2.0);
    const double gr = std::sin(position * kPi / 2.0);
    StereoPair out;
    out.left.resize(mono.size());
    out.right.resize(mono.size());
    for (std::size_t i = 0; i < mono.size(); ++i) {
        out.left[i] = mono[i] * gl;
        out.right[i] = mono[i] * gr;
    }
    return out;
}

} // namespace zsonify::dsp
