#include "zsonify/outlier_layer.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "zsonify/dsp.hpp"
#include "zsonify/parallel.hpp"

namespace zsonify {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailFactor = 2.0;

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

double level_amp(const ProcessedGalaxy& g, const EventMaps& maps) {
    return dsp::db_to_linear(dsp::lin_map(g.brightness_n, maps.level_db_lo, maps.level_db_hi));
}

std::vector<double> constant_curve(double value, std::size_t blocks) {
    return std::vector<double>(blocks, value);
}

// Low-pitched percussive hit: a sine gliding down to ratio * start over the
// drop time, holding there while the body decays, with a short noise attack.
// Position and level follow the standard bindings.
std::vector<double> percussion_mono(const ProcessedGalaxy& g, const IconRecipes& r,
                                    const EventMaps& maps, int sample_rate) {
    const double amp = level_amp(g, maps) * dsp::db_to_linear(r.percussion_gain_db);
    const double seg_s = kTailFactor * r.percussion_release_s;
    const std::size_t n = static_cast<std::size_t>(std::llround(seg_s * sample_rate));
    std::vector<double> mono(n, 0.0);

    const double f0 = r.percussion_start_hz;
    const double ratio = r.percussion_drop_ratio;
    const double drop_t = r.percussion_drop_time_s;
    const double log_inv = std::log(1.0 / ratio);
    // phase of the glide at the end of the drop, where the pitch settles
    const double drop_phase =
        ratio == 1.0 ? 2.0 * kPi * f0 * drop_t
                     : 2.0 * kPi * f0 * drop_t * (1.0 - ratio) / log_inv;
    const std::vector<double> env =
        dsp::exp_envelope({r.percussion_release_s}, n, sample_rate);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        double phase;
        if (ratio == 1.0) {
            phase = 2.0 * kPi * f0 * t;
        } else if (t <= drop_t) {
            // integral of f0 * ratio^(t/drop_t)
            phase = 2.0 * kPi * f0 * drop_t * (1.0 - std::pow(ratio, t / drop_t)) / log_inv;
        } else {
            phase = drop_phase + 2.0 * kPi * f0 * ratio * (t - drop_t);
        }
        mono[i] = amp * env[i] * std::sin(phase);
    }

    const std::size_t noise_n = std::min(
        n, static_cast<std::size_t>(std::llround(r.percussion_noise_s * sample_rate)));
    const std::vector<double> noise = dsp::white_noise(r.percussion_seed, noise_n);
    const std::vector<double> noise_env =
        dsp::exp_envelope({r.percussion_noise_s}, noise_n, sample_rate);
    for (std::size_t i = 0; i < noise_n; ++i)
        mono[i] += amp * r.percussion_noise_level * noise_env[i] * noise[i];
    return mono;
}

// High-pitched bell: inharmonic partials with staggered decays. Partials at
// or above Nyquist are dropped.
std::vector<double> bell_mono(const ProcessedGalaxy& g, const IconRecipes& r,
                              const EventMaps& maps, int sample_rate) {
    const double amp = level_amp(g, maps) * dsp::db_to_linear(r.bell_gain_db);
    double level_sum = 0.0;
    double max_release = 0.0;
    for (std::size_t k = 0; k < r.bell_ratios.size(); ++k) {
        const double f = r.bell_fundamental_hz * r.bell_ratios[k];
        if (f >= 0.45 * sample_rate) continue;
        level_sum += r.bell_levels[k];
        max_release = std::max(max_release, r.bell_release_s * r.bell_release_scale[k]);
    }
    if (level_sum <= 0.0 || max_release <= 0.0)
        throw std::invalid_argument("bell recipe leaves no audible partials");

    const double seg_s = kTailFactor * max_release;
    const std::size_t n = static_cast<std::size_t>(std::llround(seg_s * sample_rate));
    std::vector<double> mono(n, 0.0);
    for (std::size_t k = 0; k < r.bell_ratios.size(); ++k) {
        const double f = r.bell_fundamental_hz * r.bell_ratios[k];
        if (f >= 0.45 * sample_rate) continue;
        const double release = r.bell_release_s * r.bell_release_scale[k];
        const double partial_s = std::min(seg_s, kTailFactor * release);
        const std::vector<double> partial = dsp::render_sine(
            f, amp * r.bell_levels[k] / level_sum, {release}, partial_s, sample_rate);
        for (std::size_t i = 0; i < partial.size(); ++i) mono[i] += partial[i];
    }
    return mono;
}

// Pulsing band-limited rumble. Pitch, level and position keep the standard
// bindings; release follows mass and the waveshaping drive follows sfr12.
std::vector<double> rumble_mono(const ProcessedGalaxy& g, bool fast, const IconRecipes& r,
                                const EventMaps& maps, int sample_rate) {
    const double amp = level_amp(g, maps) * dsp::db_to_linear(r.rumble_gain_db);
    const double release = dsp::lin_map(g.mass_n, maps.release_s_lo, maps.release_s_hi);
    const double center = dsp::exp_map(g.mass_n, r.rumble_band_lo_hz, r.rumble_band_hi_hz);
    const double rate = fast ? r.rumble_rate_fast_hz : r.rumble_rate_slow_hz;
    const double drive = 1.0 + r.rumble_drive_max * g.sfr12_n;

    const double seg_s = kTailFactor * release;
    const std::size_t n = static_cast<std::size_t>(std::llround(seg_s * sample_rate));
    const std::size_t blocks = dsp::control_blocks(n);

    std::vector<double> mono = dsp::resonant_bandpass(
        dsp::white_noise(r.rumble_seed, n), constant_curve(center, blocks),
        constant_curve(1.0 / r.rumble_q, blocks), sample_rate);

    const std::vector<double> env = dsp::exp_envelope({release}, n, sample_rate);
    const double shape_norm = std::tanh(drive);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        const double pulse_raw = 0.5 - 0.5 * std::cos(2.0 * kPi * rate * t);
        const double pulse = pulse_raw * pulse_raw;
        const double shaped = std::tanh(drive * mono[i]) / shape_norm;
        mono[i] = amp * env[i] * pulse * shaped;
    }
    return mono;
}

// Sensor-saturation glitch: short rectangular noise bursts, bandpassed at
// the pitch binding. Pitch and position only; the level is fixed.
std::vector<double> glitch_mono(const ProcessedGalaxy& g, const IconRecipes& r,
                                const EventMaps& maps, int sample_rate) {
    const double amp = dsp::db_to_linear(r.glitch_level_db);
    const double center = dsp::exp_map(g.mass_n, maps.f0_hz_lo, maps.f0_hz_hi);

    const double seg_s = r.glitch_duration_s + 0.05; // ring-out pad
    const std::size_t n = static_cast<std::size_t>(std::llround(seg_s * sample_rate));
    const std::size_t burst_count = static_cast<std::size_t>(std::max(0, r.glitch_bursts));

    // Burst pattern from the fixed seed, identical for every glitch icon.
    const std::vector<double> draws = dsp::white_noise(r.glitch_seed, 2 * burst_count);
    std::vector<double> gate(n, 0.0);
    const double max_len_s = r.glitch_burst_max_ms / 1000.0;
    const double min_len_s = r.glitch_burst_min_ms / 1000.0;
    for (std::size_t k = 0; k < burst_count; ++k) {
        const double u_onset = 0.5 * (draws[2 * k] + 1.0);
        const double u_len = 0.5 * (draws[2 * k + 1] + 1.0);
        const double onset_s = u_onset * std::max(0.0, r.glitch_duration_s - max_len_s);
        const double len_s = min_len_s + u_len * (max_len_s - min_len_s);
        const std::size_t begin =
            static_cast<std::size_t>(std::llround(onset_s * sample_rate));
        const std::size_t end =
            std::min(n, begin + static_cast<std::size_t>(std::llround(len_s * sample_rate)));
        for (std::size_t i = begin; i < end && i < n; ++i) gate[i] = 1.0;
    }

    std::vector<double> noise = dsp::white_noise(r.glitch_seed + 1, n);
    for (std::size_t i = 0; i < n; ++i) noise[i] *= gate[i];

    const std::size_t blocks = dsp::control_blocks(n);
    std::vector<double> mono =
        dsp::resonant_bandpass(noise, constant_curve(center, blocks),
                               constant_curve(1.0 / r.glitch_q, blocks), sample_rate);
    for (auto& v : mono) v *= amp;
    return mono;
}

} // namespace

const char* icon_kind_name(IconKind kind) {
    switch (kind) {
        case IconKind::percussion: return "percussion";
        case IconKind::bell: return "bell";
        case IconKind::rumble_fast: return "rumble_fast";
        case IconKind::rumble_slow: return "rumble_slow";
        case IconKind::glitch: return "glitch";
    }
    return "unknown";
}

IconSpec icon_for(OutlierKind flag) {
    switch (flag) {
        case OutlierKind::mass_high: return {IconKind::percussion};
        case OutlierKind::mass_low: return {IconKind::bell};
        case OutlierKind::sfr_high: return {IconKind::rumble_fast};
        case OutlierKind::sfr_low: return {IconKind::rumble_slow};
        case OutlierKind::bright: return {IconKind::glitch};
        case OutlierKind::none: break;
    }
    throw std::invalid_argument("icon_for: galaxy is not flagged");
}

double icon_segment_seconds(const IconSpec& spec, const ProcessedGalaxy& g,
                            const IconRecipes& recipes, const EventMaps& maps) {
    switch (spec.kind) {
        case IconKind::percussion:
            return kTailFactor * recipes.percussion_release_s;
        case IconKind::bell: {
            double max_release = 0.0;
            for (std::size_t k = 0; k < recipes.bell_ratios.size(); ++k)
                max_release = std::max(max_release,
                                       recipes.bell_release_s * recipes.bell_release_scale[k]);
            return kTailFactor * max_release;
        }
        case IconKind::rumble_fast:
        case IconKind::rumble_slow:
            return kTailFactor * dsp::lin_map(g.mass_n, maps.release_s_lo, maps.release_s_hi);
        case IconKind::glitch:
            return recipes.glitch_duration_s + 0.05;
    }
    return 0.0;
}

StereoPair render_icon(const IconSpec& spec, const ProcessedGalaxy& g,
                       const IconRecipes& recipes, const EventMaps& maps,
                       int sample_rate) {
    std::vector<double> mono;
    switch (spec.kind) {
        case IconKind::percussion:
            mono = percussion_mono(g, recipes, maps, sample_rate);
            break;
        case IconKind::bell:
            mono = bell_mono(g, recipes, maps, sample_rate);
            break;
        case IconKind::rumble_fast:
            mono = rumble_mono(g, true, recipes, maps, sample_rate);
            break;
        case IconKind::rumble_slow:
            mono = rumble_mono(g, false, recipes, maps, sample_rate);
            break;
        case IconKind::glitch:
            mono = glitch_mono(g, recipes, maps, sample_rate);
            break;
    }
    return dsp::pan(mono, g.ra_n);
}

AudioBuffer render_outlier_layer(const std::vector<ProcessedGalaxy>& galaxies,
                                 const IconRecipes& recipes, const EventMaps& maps,
                                 int sample_rate, int threads) {
    AudioBuffer buffer;
    buffer.sample_rate = sample_rate;
    buffer.ensure_frames(
        static_cast<std::size_t>(std::llround(maps.duration_s * sample_rate)));

    std::vector<const ProcessedGalaxy*> flagged;
    for (const auto& g : galaxies)
        if (g.flag != OutlierKind::none) flagged.push_back(&g);

    std::vector<double> onsets(flagged.size());
    for (std::size_t i = 0; i < flagged.size(); ++i)
        onsets[i] = dsp::lin_map(flagged[i]->tl_n, 0.0, maps.duration_s);

    ordered_render_merge(
        flagged.size(), threads,
        [&](std::size_t i) {
            return render_icon(icon_for(flagged[i]->flag), *flagged[i], recipes, maps,
                               sample_rate);
        },
        [&](std::size_t i, StereoPair&& segment) { mix_into(buffer, segment, onsets[i]); });
    return buffer;
}

void write_icon_log(const std::vector<ProcessedGalaxy>& galaxies,
                    const EventMaps& maps, std::ostream& out) {
    out << "id,kind,onset_s,position\n";
    for (const auto& g : galaxies) {
        if (g.flag == OutlierKind::none) continue;
        const IconSpec spec = icon_for(g.flag);
        out << g.id << ',' << icon_kind_name(spec.kind) << ','
            << format_double(dsp::lin_map(g.tl_n, 0.0, maps.duration_s)) << ','
            << format_double(g.ra_n) << '\n';
    }
}

} // namespace zsonify
