#pragma once

#include <iosfwd>
#include <vector>

#include "zsonify/audio_buffer.hpp"
#include "zsonify/preprocess.hpp"

namespace zsonify {

/// Endpoints of the per-galaxy parameter maps. Feature 0 maps to *_lo,
/// feature 1 to *_hi; f0/fm/deviation interpolate geometrically, the rest
/// linearly.
struct EventMaps {
    double duration_s = 1500.0; // onset endpoint for tl_n = 1
    double level_db_lo = -34.0, level_db_hi = -10.0;
    double f0_hz_lo = 7000.0, f0_hz_hi = 400.0;
    double fm_hz_lo = 2.88, fm_hz_hi = 252.0;
    double deviation_hz_lo = 12.0, deviation_hz_hi = 1050.0;
    double release_s_lo = 0.3, release_s_hi = 9.6;
};

/// Fully resolved synthesis parameters for one galaxy event.
struct EventParams {
    double onset_s = 0.0;
    double level_db = 0.0;
    double position = 0.5;
    double f0_hz = 0.0;
    double fm_hz = 0.0;
    double deviation_hz = 0.0;
    double release_s = 0.0;
};

EventParams event_params(const ProcessedGalaxy& g, const EventMaps& maps = {});

/// One voice of the three-oscillator event.
struct OscSpec {
    double pitch_hz = 0.0;
    double level = 0.0; // linear
    double release_s = 0.0;
    double position = 0.5;
    bool fm = false;
};

/// Master, harmonic and sub-harmonic oscillators:
/// O2 = (2 f0, 0.25 a, 0.5 r), O3 = (0.75 f0, 0.6 a, 0.6 r, FM).
struct OscillatorTriple {
    OscSpec o1, o2, o3;
};

OscillatorTriple oscillator_triple(const EventParams& p);

/// Segment length for one event: the longest release plus an equal tail,
/// so the decay reaches -120 dB before truncation.
double event_segment_seconds(const EventParams& p);

/// Sum of the three enveloped oscillators, panned at the event position.
StereoPair render_event(const OscillatorTriple& triple, const EventParams& p,
                        int sample_rate);

/// Renders all unflagged galaxies at their onsets into one stereo buffer of
/// at least the configured duration (event tails may extend it). Flagged
/// galaxies are skipped; they are rendered as icons by the outlier layer.
AudioBuffer render_galaxy_layer(const std::vector<ProcessedGalaxy>& galaxies,
                                const EventMaps& maps, int sample_rate,
                                int threads = 1);

/// One row per unflagged galaxy:
/// id,onset_s,f0_hz,fm_hz,deviation_hz,level_db,position,release_s.
void write_event_log(const std::vector<ProcessedGalaxy>& galaxies,
                     const EventMaps& maps, std::ostream& out);

} // namespace zsonify
