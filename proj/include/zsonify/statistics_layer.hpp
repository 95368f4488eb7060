#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "zsonify/audio_buffer.hpp"
#include "zsonify/preprocess.hpp"

namespace zsonify {

/// One drone voice: filtered noise whose center frequency is
/// multiplier * moving-average curve, panned at a fixed position.
struct DroneVoice {
    double multiplier = 1.0;
    double pan_position = 0.5;
    std::uint64_t seed = 0;
    double gain_db = 0.0;
};

struct DroneSpec {
    DroneVoice mass{200.0, 0.5, 1, 0.0};        // center
    DroneVoice brightness{2000.0, 0.0, 2, 0.0}; // left
    DroneVoice sfr{1000.0, 1.0, 3, 0.0};        // right
    double inv_q_start = 0.0001;
    double inv_q_end = 0.2;
};

/// Center-frequency curves sampled once per control block over the render
/// duration. Grid positions map to seconds with the same linear timeline
/// as event onsets; values between grid points interpolate linearly.
struct DroneCurves {
    std::vector<double> f_mass_hz;
    std::vector<double> f_brightness_hz;
    std::vector<double> f_sfr_hz;
};

DroneCurves drone_frequency_curves(const FeatureStats& stats, const DroneSpec& spec,
                                   double duration_s, int sample_rate);

/// 1/Q at time t: rises linearly from inv_q_start at t = 0 to inv_q_end at
/// t = duration, so the filters decay from sharp pitches into band-limited
/// noise.
double inv_q_at(double t_s, double duration_s, const DroneSpec& spec = {});

/// The 1/Q trajectory sampled once per control block.
std::vector<double> q_trajectory(double duration_s, int sample_rate,
                                 const DroneSpec& spec = {});

/// Three seeded noise sources through their time-varying resonators,
/// panned and summed in a fixed order (mass, brightness, sfr).
AudioBuffer render_statistics_layer(const FeatureStats& stats, const DroneSpec& spec,
                                    double duration_s, int sample_rate);

/// Delimited text, one row per control block:
/// t_seconds,f1,f2,f3,invq.
void write_drone_curves(const DroneCurves& curves, const std::vector<double>& inv_q,
                        int sample_rate, std::ostream& out);

} // namespace zsonify
