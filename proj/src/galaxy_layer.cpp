#include "zsonify/galaxy_layer.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "zsonify/dsp.hpp"
#include "zsonify/parallel.hpp"

namespace zsonify {

namespace {

// Harmonic / sub-harmonic relationships to the master oscillator.
constexpr double kO2PitchRatio = 2.0;
constexpr double kO2LevelRatio = 0.25;
constexpr double kO2ReleaseRatio = 0.5;
constexpr double kO3PitchRatio = 0.75;
constexpr double kO3LevelRatio = 0.6;
constexpr double kO3ReleaseRatio = 0.6;

// Segments run to twice the release so the truncated tail sits at -120 dB.
constexpr double kTailFactor = 2.0;

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

} // namespace

EventParams event_params(const ProcessedGalaxy& g, const EventMaps& maps) {
    EventParams p;
    p.onset_s = dsp::lin_map(g.tl_n, 0.0, maps.duration_s);
    p.level_db = dsp::lin_map(g.brightness_n, maps.level_db_lo, maps.level_db_hi);
    if (!(g.ra_n >= 0.0 && g.ra_n <= 1.0))
        throw std::invalid_argument("event_params: ra_n outside [0, 1]");
    p.position = g.ra_n;
    p.f0_hz = dsp::exp_map(g.mass_n, maps.f0_hz_lo, maps.f0_hz_hi);
    p.fm_hz = dsp::exp_map(g.sfr12_n, maps.fm_hz_lo, maps.fm_hz_hi);
    p.deviation_hz = dsp::exp_map(g.sfr12_n, maps.deviation_hz_lo, maps.deviation_hz_hi);
    p.release_s = dsp::lin_map(g.sfr12_n, maps.release_s_lo, maps.release_s_hi);
    return p;
}

OscillatorTriple oscillator_triple(const EventParams& p) {
    const double a = dsp::db_to_linear(p.level_db);
    OscillatorTriple t;
    t.o1 = {p.f0_hz, a, p.release_s, p.position, false};
    t.o2 = {kO2PitchRatio * p.f0_hz, kO2LevelRatio * a, kO2ReleaseRatio * p.release_s,
            p.position, false};
    t.o3 = {kO3PitchRatio * p.f0_hz, kO3LevelRatio * a, kO3ReleaseRatio * p.release_s,
            p.position, true};
    return t;
}

double event_segment_seconds(const EventParams& p) { return kTailFactor * p.release_s; }

StereoPair render_event(const OscillatorTriple& triple, const EventParams& p,
                        int sample_rate) {
    const double segment_s = event_segment_seconds(p);
    const std::size_t n =
        static_cast<std::size_t>(std::llround(segment_s * sample_rate));
    std::vector<double> mono(n, 0.0);

    for (const OscSpec* osc : {&triple.o1, &triple.o2, &triple.o3}) {
        const double osc_s = std::min(segment_s, kTailFactor * osc->release_s);
        const dsp::EnvelopeSpec env{osc->release_s};
        std::vector<double> voice =
            osc->fm ? dsp::render_fm(osc->pitch_hz, p.fm_hz, p.deviation_hz, osc->level,
                                     env, osc_s, sample_rate)
                    : dsp::render_sine(osc->pitch_hz, osc->level, env, osc_s, sample_rate);
        const std::size_t m = std::min(voice.size(), mono.size());
        for (std::size_t i = 0; i < m; ++i) mono[i] += voice[i];
    }
    return dsp::pan(mono, p.position);
}

AudioBuffer render_galaxy_layer(const std::vector<ProcessedGalaxy>& galaxies,
                                const EventMaps& maps, int sample_rate, int threads) {
    AudioBuffer buffer;
    buffer.sample_rate = sample_rate;
    buffer.ensure_frames(
        static_cast<std::size_t>(std::llround(maps.duration_s * sample_rate)));

    std::vector<EventParams> events;
    events.reserve(galaxies.size());
    for (const auto& g : galaxies) {
        if (g.flag != OutlierKind::none) continue; // icons cover these
        events.push_back(event_params(g, maps));
    }

    ordered_render_merge(
        events.size(), threads,
        [&](std::size_t i) { return render_event(oscillator_triple(events[i]), events[i], sample_rate); },
        [&](std::size_t i, StereoPair&& segment) { mix_into(buffer, segment, events[i].onset_s); });
    return buffer;
}

void write_event_log(const std::vector<ProcessedGalaxy>& galaxies,
                     const EventMaps& maps, std::ostream& out) {
    out << "id,onset_s,f0_hz,fm_hz,deviation_hz,level_db,position,release_s\n";
    for (const auto& g : galaxies) {
        if (g.flag != OutlierKind::none) continue;
        const EventParams p = event_params(g, maps);
        out << g.id << ',' << format_double(p.onset_s) << ',' << format_double(p.f0_hz)
            << ',' << format_double(p.fm_hz) << ',' << format_double(p.deviation_hz)
            << ',' << format_double(p.level_db) << ',' << format_double(p.position)
            << ',' << format_double(p.release_s) << '\n';
    }
}

} // namespace zsonify
