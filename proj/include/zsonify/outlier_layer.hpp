#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "zsonify/audio_buffer.hpp"
#include "zsonify/galaxy_layer.hpp"
#include "zsonify/preprocess.hpp"

namespace zsonify {

enum class IconKind {
    percussion,  // biggest galaxy
    bell,        // smallest galaxies
    rumble_fast, // high star formation
    rumble_slow, // low star formation
    glitch,      // very bright galaxies
};

const char* icon_kind_name(IconKind kind);

struct IconSpec {
    IconKind kind;
};

/// mass_high -> percussion, mass_low -> bell, sfr_high -> rumble_fast,
/// sfr_low -> rumble_slow, bright -> glitch. flag = none throws.
IconSpec icon_for(OutlierKind flag);

/// Synthesis constants for the auditory icons. The icon characters are
/// fixed; which galaxy features modulate them depends on the kind:
/// percussion/bell take position and level, rumbles take pitch, level,
/// position, release and distortion, glitches take pitch and position only.
struct IconRecipes {
    double percussion_gain_db = 0.0;
    double bell_gain_db = -4.0;
    double rumble_gain_db = -10.0;
    double glitch_level_db = -28.0; // fixed level, not brightness-driven

    // percussion: sine with an exponential pitch drop plus a short noise hit
    double percussion_start_hz = 55.0;
    double percussion_drop_ratio = 0.5;
    double percussion_drop_time_s = 0.5;
    double percussion_release_s = 4.0;
    double percussion_noise_level = 0.3;
    double percussion_noise_s = 0.02;
    std::uint64_t percussion_seed = 101;

    // bell: inharmonic partial stack with staggered decays
    double bell_fundamental_hz = 2500.0;
    std::vector<double> bell_ratios{1.0, 2.76, 5.40, 8.93};
    std::vector<double> bell_levels{1.0, 0.5, 0.33, 0.25};
    std::vector<double> bell_release_scale{1.0, 0.6, 0.4, 0.25};
    double bell_release_s = 3.0;

    // rumble: pulsing band-limited noise with waveshaping drive
    double rumble_band_lo_hz = 80.0;
    double rumble_band_hi_hz = 400.0;
    double rumble_q = 8.0;
    double rumble_rate_fast_hz = 8.0;
    double rumble_rate_slow_hz = 1.5;
    double rumble_drive_max = 9.0;
    std::uint64_t rumble_seed = 102;

    // glitch: a train of short rectangular noise bursts, bandpassed at the
    // pitch binding
    double glitch_duration_s = 0.15;
    double glitch_burst_min_ms = 1.0;
    double glitch_burst_max_ms = 5.0;
    int glitch_bursts = 12;
    double glitch_q = 2.0;
    std::uint64_t glitch_seed = 103;
};

double icon_segment_seconds(const IconSpec& spec, const ProcessedGalaxy& g,
                            const IconRecipes& recipes, const EventMaps& maps);

/// Synthesizes one icon with its active modulations applied through the
/// standard endpoint maps, panned at ra_n.
StereoPair render_icon(const IconSpec& spec, const ProcessedGalaxy& g,
                       const IconRecipes& recipes, const EventMaps& maps,
                       int sample_rate);

/// One icon per flagged galaxy, placed with the same timeline map as
/// ordinary events. Unflagged galaxies are ignored.
AudioBuffer render_outlier_layer(const std::vector<ProcessedGalaxy>& galaxies,
                                 const IconRecipes& recipes, const EventMaps& maps,
                                 int sample_rate, int threads = 1);

/// One row per flagged galaxy: id,kind,onset_s,position.
void write_icon_log(const std::vector<ProcessedGalaxy>& galaxies,
                    const EventMaps& maps, std::ostream& out);

} // namespace zsonify
