#include "zsonify/statistics_layer.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "zsonify/dsp.hpp"

namespace zsonify {

namespace {

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

// Linear interpolation of a stats curve (on the tl_n axis, mapped to the
// timeline) at time t; clamps outside the grid.
double curve_at(const FeatureStats& stats, const std::vector<double>& values,
                double t_s, double duration_s) {
    const double g = duration_s > 0.0 ? t_s / duration_s : 0.0;
    if (g <= stats.grid.front()) return values.front();
    if (g >= stats.grid.back()) return values.back();
    const auto it = std::upper_bound(stats.grid.begin(), stats.grid.end(), g);
    const std::size_t hi = static_cast<std::size_t>(it - stats.grid.begin());
    const std::size_t lo = hi - 1;
    const double span = stats.grid[hi] - stats.grid[lo];
    const double frac = span > 0.0 ? (g - stats.grid[lo]) / span : 0.0;
    return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<double> sample_blocks(const FeatureStats& stats,
                                  const std::vector<double>& values, double multiplier,
                                  double duration_s, int sample_rate, std::size_t blocks) {
    std::vector<double> out(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const double t = static_cast<double>(b * dsp::kControlBlockSize) / sample_rate;
        const double f = multiplier * curve_at(stats, values, t, duration_s);
        if (!(f > 0.0))
            throw std::invalid_argument(
                "drone_frequency_curves: non-positive center frequency");
        out[b] = f;
    }
    return out;
}

} // namespace

DroneCurves drone_frequency_curves(const FeatureStats& stats, const DroneSpec& spec,
                                   double duration_s, int sample_rate) {
    if (stats.grid.empty())
        throw std::invalid_argument("drone_frequency_curves: empty stats grid");
    if (!(duration_s > 0.0))
        throw std::invalid_argument("drone_frequency_curves: duration must be positive");

    const std::size_t n =
        static_cast<std::size_t>(std::llround(duration_s * sample_rate));
    const std::size_t blocks = dsp::control_blocks(n);
    DroneCurves curves;
    curves.f_mass_hz =
        sample_blocks(stats, stats.avg_mass_n, spec.mass.multiplier, duration_s,
                      sample_rate, blocks);
    curves.f_brightness_hz =
        sample_blocks(stats, stats.avg_brightness_n, spec.brightness.multiplier,
                      duration_s, sample_rate, blocks);
    curves.f_sfr_hz = sample_blocks(stats, stats.avg_sfr12_n, spec.sfr.multiplier,
                                    duration_s, sample_rate, blocks);
    return curves;
}

double inv_q_at(double t_s, double duration_s, const DroneSpec& spec) {
    if (!(duration_s > 0.0)) throw std::invalid_argument("inv_q_at: duration must be positive");
    const double x = std::clamp(t_s / duration_s, 0.0, 1.0);
    return dsp::lin_map(x, spec.inv_q_start, spec.inv_q_end);
}

std::vector<double> q_trajectory(double duration_s, int sample_rate, const DroneSpec& spec) {
    const std::size_t n =
        static_cast<std::size_t>(std::llround(duration_s * sample_rate));
    const std::size_t blocks = dsp::control_blocks(n);
    std::vector<double> out(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const double t = static_cast<double>(b * dsp::kControlBlockSize) / sample_rate;
        out[b] = inv_q_at(t, duration_s, spec);
    }
    return out;
}

AudioBuffer render_statistics_layer(const FeatureStats& stats, const DroneSpec& spec,
                                    double duration_s, int sample_rate) {
    const DroneCurves curves = drone_frequency_curves(stats, spec, duration_s, sample_rate);
    const std::vector<double> inv_q = q_trajectory(duration_s, sample_rate, spec);
    const std::size_t n =
        static_cast<std::size_t>(std::llround(duration_s * sample_rate));

    AudioBuffer buffer;
    buffer.sample_rate = sample_rate;
    buffer.ensure_frames(n);

    struct VoiceRun {
        const DroneVoice* voice;
        const std::vector<double>* centers;
    };
    // Fixed summation order keeps renders bit-identical.
    const std::array<VoiceRun, 3> voices{{
        {&spec.mass, &curves.f_mass_hz},
        {&spec.brightness, &curves.f_brightness_hz},
        {&spec.sfr, &curves.f_sfr_hz},
    }};

    for (const auto& run : voices) {
        const std::vector<double> noise = dsp::white_noise(run.voice->seed, n);
        const std::vector<double> filtered =
            dsp::resonant_bandpass(noise, *run.centers, inv_q, sample_rate);
        const StereoPair voice = dsp::pan(filtered, run.voice->pan_position);
        const double gain = dsp::db_to_linear(run.voice->gain_db);
        for (std::size_t i = 0; i < n; ++i) {
            buffer.left[i] += gain * voice.left[i];
            buffer.right[i] += gain * voice.right[i];
        }
    }
    return buffer;
}

void write_drone_curves(const DroneCurves& curves, const std::vector<double>& inv_q,
                        int sample_rate, std::ostream& out) {
    out << "t_seconds,f1,f2,f3,invq\n";
    for (std::size_t b = 0; b < inv_q.size(); ++b) {
        const double t = static_cast<double>(b * dsp::kControlBlockSize) / sample_rate;
        out << format_double(t) << ',' << format_double(curves.f_mass_hz[b]) << ','
            << format_double(curves.f_brightness_hz[b]) << ','
            << format_double(curves.f_sfr_hz[b]) << ',' << format_double(inv_q[b]) << '\n';
    }
}

} // namespace zsonify
