#include "zsonify/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "zsonify/errors.hpp"

namespace zsonify {

namespace {

using nlohmann::json;

// Tracks which keys of an object were consumed; anything left over is a
// config error, so typos never pass silently.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object())
            throw ConfigError(path_ + ": expected an object");
    }

    const json* find(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!seen_.count(item.key()))
                throw ConfigError("unknown config key: " + path_ + item.key());
    }

    std::string path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_double(Section& s, const char* key, double& out) {
    if (const json* v = s.find(key)) {
        if (!v->is_number()) throw ConfigError(s.path() + key + ": expected a number");
        out = v->get<double>();
    }
}

void read_int(Section& s, const char* key, int& out) {
    if (const json* v = s.find(key)) {
        if (!v->is_number_integer()) throw ConfigError(s.path() + key + ": expected an integer");
        out = v->get<int>();
    }
}

void read_size(Section& s, const char* key, std::size_t& out) {
    if (const json* v = s.find(key)) {
        if (!v->is_number_unsigned()) {
            throw ConfigError(s.path() + key + ": expected a non-negative integer");
        }
        out = v->get<std::size_t>();
    }
}

void read_seed(Section& s, const char* key, std::uint64_t& out) {
    if (const json* v = s.find(key)) {
        if (!v->is_number_unsigned())
            throw ConfigError(s.path() + key + ": expected a non-negative integer");
        out = v->get<std::uint64_t>();
    }
}

void read_bool(Section& s, const char* key, bool& out) {
    if (const json* v = s.find(key)) {
        if (!v->is_boolean()) throw ConfigError(s.path() + key + ": expected a boolean");
        out = v->get<bool>();
    }
}

void read_string(Section& s, const char* key, std::string& out) {
    if (const json* v = s.find(key)) {
        if (!v->is_string()) throw ConfigError(s.path() + key + ": expected a string");
        out = v->get<std::string>();
    }
}

// Two-element [lo, hi] arrays for the mapping endpoints.
void read_pair(Section& s, const char* key, double& lo, double& hi) {
    if (const json* v = s.find(key)) {
        if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
            throw ConfigError(s.path() + key + ": expected [lo, hi]");
        lo = (*v)[0].get<double>();
        hi = (*v)[1].get<double>();
    }
}

void read_doubles(Section& s, const char* key, std::vector<double>& out) {
    if (const json* v = s.find(key)) {
        if (!v->is_array()) throw ConfigError(s.path() + key + ": expected an array");
        std::vector<double> values;
        for (const auto& e : *v) {
            if (!e.is_number()) throw ConfigError(s.path() + key + ": expected numbers");
            values.push_back(e.get<double>());
        }
        out = std::move(values);
    }
}

void parse_audio(const json& j, RenderConfig& cfg) {
    Section s(j, "audio.");
    read_double(s, "duration_s", cfg.duration_s);
    read_int(s, "sample_rate", cfg.sample_rate);
    read_int(s, "bit_depth", cfg.bit_depth);
    read_int(s, "threads", cfg.threads);
    s.finish();
}

void parse_gains(const json& j, RenderConfig& cfg) {
    Section s(j, "gains_db.");
    read_double(s, "galaxies", cfg.gain_galaxies_db);
    read_double(s, "statistics", cfg.gain_statistics_db);
    read_double(s, "outliers", cfg.gain_outliers_db);
    read_double(s, "master", cfg.gain_master_db);
    s.finish();
}

void parse_catalog_section(const json& j, RenderConfig& cfg) {
    Section s(j, "catalog.");
    if (const json* v = s.find("delimiter")) {
        if (!v->is_string() || v->get<std::string>().size() != 1)
            throw ConfigError("catalog.delimiter: expected a single character");
        cfg.schema.delimiter = v->get<std::string>()[0];
    }
    if (const json* v = s.find("columns")) {
        Section c(*v, "catalog.columns.");
        read_string(c, "id", cfg.schema.id);
        read_string(c, "stellar_mass", cfg.schema.stellar_mass);
        read_string(c, "sfr", cfg.schema.sfr);
        read_string(c, "redshift", cfg.schema.redshift);
        read_string(c, "age", cfg.schema.age);
        read_string(c, "abs_magnitude", cfg.schema.abs_magnitude);
        read_string(c, "right_ascension", cfg.schema.right_ascension);
        read_string(c, "declination", cfg.schema.declination);
        c.finish();
    }
    s.finish();
}

void parse_filters(const json* quality, const json* bias, RenderConfig& cfg) {
    if (quality) {
        Section s(*quality, "quality_filter.");
        read_double(s, "magnitude_floor", cfg.quality.magnitude_floor);
        read_double(s, "mass_floor", cfg.quality.mass_floor);
        s.finish();
    }
    if (bias) {
        Section s(*bias, "bias_filter.");
        read_double(s, "age_min_gyr", cfg.bias.age_min_gyr);
        read_double(s, "magnitude_ceiling", cfg.bias.magnitude_ceiling);
        s.finish();
    }
}

void parse_clip(const json& j, RenderConfig& cfg) {
    Section s(j, "clip.");
    read_pair(s, "mass", cfg.clip.mass_lo, cfg.clip.mass_hi);
    read_pair(s, "sfr", cfg.clip.sfr_lo, cfg.clip.sfr_hi);
    read_double(s, "magnitude_floor", cfg.clip.magnitude_lo);
    s.finish();
}

void parse_event_maps(const json& j, RenderConfig& cfg) {
    Section s(j, "event_maps.");
    read_pair(s, "level_db", cfg.maps.level_db_lo, cfg.maps.level_db_hi);
    read_pair(s, "f0_hz", cfg.maps.f0_hz_lo, cfg.maps.f0_hz_hi);
    read_pair(s, "fm_hz", cfg.maps.fm_hz_lo, cfg.maps.fm_hz_hi);
    read_pair(s, "deviation_hz", cfg.maps.deviation_hz_lo, cfg.maps.deviation_hz_hi);
    read_pair(s, "release_s", cfg.maps.release_s_lo, cfg.maps.release_s_hi);
    s.finish();
}

void parse_statistics(const json& j, RenderConfig& cfg) {
    Section s(j, "statistics.");
    read_double(s, "window", cfg.stats_window);
    read_size(s, "grid", cfg.stats_grid);
    if (const json* v = s.find("multipliers")) {
        Section m(*v, "statistics.multipliers.");
        read_double(m, "mass", cfg.drone.mass.multiplier);
        read_double(m, "brightness", cfg.drone.brightness.multiplier);
        read_double(m, "sfr", cfg.drone.sfr.multiplier);
        m.finish();
    }
    if (const json* v = s.find("pan")) {
        Section m(*v, "statistics.pan.");
        read_double(m, "mass", cfg.drone.mass.pan_position);
        read_double(m, "brightness", cfg.drone.brightness.pan_position);
        read_double(m, "sfr", cfg.drone.sfr.pan_position);
        m.finish();
    }
    if (const json* v = s.find("seeds")) {
        Section m(*v, "statistics.seeds.");
        read_seed(m, "mass", cfg.drone.mass.seed);
        read_seed(m, "brightness", cfg.drone.brightness.seed);
        read_seed(m, "sfr", cfg.drone.sfr.seed);
        m.finish();
    }
    if (const json* v = s.find("voice_gains_db")) {
        Section m(*v, "statistics.voice_gains_db.");
        read_double(m, "mass", cfg.drone.mass.gain_db);
        read_double(m, "brightness", cfg.drone.brightness.gain_db);
        read_double(m, "sfr", cfg.drone.sfr.gain_db);
        m.finish();
    }
    read_pair(s, "inv_q", cfg.drone.inv_q_start, cfg.drone.inv_q_end);
    s.finish();
}

void parse_icons(const json& j, RenderConfig& cfg) {
    Section s(j, "icons.");
    if (const json* v = s.find("gains_db")) {
        Section m(*v, "icons.gains_db.");
        read_double(m, "percussion", cfg.icons.percussion_gain_db);
        read_double(m, "bell", cfg.icons.bell_gain_db);
        read_double(m, "rumble", cfg.icons.rumble_gain_db);
        m.finish();
    }
    read_double(s, "glitch_level_db", cfg.icons.glitch_level_db);
    if (const json* v = s.find("percussion")) {
        Section m(*v, "icons.percussion.");
        read_double(m, "start_hz", cfg.icons.percussion_start_hz);
        read_double(m, "drop_ratio", cfg.icons.percussion_drop_ratio);
        read_double(m, "drop_time_s", cfg.icons.percussion_drop_time_s);
        read_double(m, "release_s", cfg.icons.percussion_release_s);
        read_double(m, "noise_level", cfg.icons.percussion_noise_level);
        read_double(m, "noise_s", cfg.icons.percussion_noise_s);
        read_seed(m, "seed", cfg.icons.percussion_seed);
        m.finish();
    }
    if (const json* v = s.find("bell")) {
        Section m(*v, "icons.bell.");
        read_double(m, "fundamental_hz", cfg.icons.bell_fundamental_hz);
        read_doubles(m, "ratios", cfg.icons.bell_ratios);
        read_doubles(m, "levels", cfg.icons.bell_levels);
        read_doubles(m, "release_scale", cfg.icons.bell_release_scale);
        read_double(m, "release_s", cfg.icons.bell_release_s);
        m.finish();
    }
    if (const json* v = s.find("rumble")) {
        Section m(*v, "icons.rumble.");
        read_double(m, "band_lo_hz", cfg.icons.rumble_band_lo_hz);
        read_double(m, "band_hi_hz", cfg.icons.rumble_band_hi_hz);
        read_double(m, "q", cfg.icons.rumble_q);
        read_double(m, "rate_fast_hz", cfg.icons.rumble_rate_fast_hz);
        read_double(m, "rate_slow_hz", cfg.icons.rumble_rate_slow_hz);
        read_double(m, "drive_max", cfg.icons.rumble_drive_max);
        read_seed(m, "seed", cfg.icons.rumble_seed);
        m.finish();
    }
    if (const json* v = s.find("glitch")) {
        Section m(*v, "icons.glitch.");
        read_double(m, "duration_s", cfg.icons.glitch_duration_s);
        read_double(m, "burst_min_ms", cfg.icons.glitch_burst_min_ms);
        read_double(m, "burst_max_ms", cfg.icons.glitch_burst_max_ms);
        read_int(m, "bursts", cfg.icons.glitch_bursts);
        read_double(m, "q", cfg.icons.glitch_q);
        read_seed(m, "seed", cfg.icons.glitch_seed);
        m.finish();
    }
    s.finish();
}

void parse_reverb(const json& j, RenderConfig& cfg) {
    Section s(j, "reverb.");
    read_bool(s, "enabled", cfg.reverb.enabled);
    if (const json* v = s.find("sends_db")) {
        Section m(*v, "reverb.sends_db.");
        read_double(m, "galaxies", cfg.reverb.send_galaxies_db);
        read_double(m, "statistics", cfg.reverb.send_statistics_db);
        read_double(m, "outliers", cfg.reverb.send_outliers_db);
        m.finish();
    }
    s.finish();
}

void parse_paths(const json& j, RenderConfig& cfg) {
    Section s(j, "paths.");
    read_string(s, "catalog", cfg.catalog_path);
    read_string(s, "out", cfg.out_path);
    read_string(s, "report_dir", cfg.report_dir);
    s.finish();
}

void check(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

void check_finite(double v, const std::string& key) {
    check(std::isfinite(v), key + ": must be finite");
}

} // namespace

RenderConfig config_from_json(const json& j) {
    RenderConfig cfg;
    Section s(j, "");
    if (const json* v = s.find("audio")) parse_audio(*v, cfg);
    if (const json* v = s.find("gains_db")) parse_gains(*v, cfg);
    if (const json* v = s.find("catalog")) parse_catalog_section(*v, cfg);
    parse_filters(s.find("quality_filter"), s.find("bias_filter"), cfg);
    if (const json* v = s.find("clip")) parse_clip(*v, cfg);
    if (const json* v = s.find("event_maps")) parse_event_maps(*v, cfg);
    if (const json* v = s.find("statistics")) parse_statistics(*v, cfg);
    if (const json* v = s.find("icons")) parse_icons(*v, cfg);
    if (const json* v = s.find("reverb")) parse_reverb(*v, cfg);
    if (const json* v = s.find("histogram_bins")) {
        if (!v->is_number_integer()) throw ConfigError("histogram_bins: expected an integer");
        cfg.histogram_bins = v->get<int>();
    }
    if (const json* v = s.find("paths")) parse_paths(*v, cfg);
    s.finish();

    cfg.maps.duration_s = cfg.duration_s; // single source for the timeline
    validate_config(cfg);
    return cfg;
}

RenderConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    const std::string body = text.str();

    // An empty or whitespace-only file means all defaults.
    if (body.find_first_not_of(" \t\r\n") == std::string::npos)
        return config_from_json(json::object());

    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

std::string resolve_report_dir(const std::string& cli_value,
                               const std::string& config_value) {
    if (!cli_value.empty()) return cli_value;
    if (!config_value.empty()) return config_value;
    if (const char* env = std::getenv("ZSONIFY_REPORT_DIR")) return env;
    return {};
}

void validate_config(const RenderConfig& cfg) {
    check(cfg.duration_s > 0.0, "audio.duration_s: must be positive");
    check(cfg.sample_rate > 0, "audio.sample_rate: must be positive");
    check(cfg.bit_depth == 16 || cfg.bit_depth == 24 || cfg.bit_depth == 32,
          "audio.bit_depth: must be 16, 24 or 32");
    check(cfg.threads >= 0, "audio.threads: must be >= 0");

    const std::pair<double, const char*> finite_gains[] = {
        {cfg.gain_galaxies_db, "gains_db.galaxies"},
        {cfg.gain_statistics_db, "gains_db.statistics"},
        {cfg.gain_outliers_db, "gains_db.outliers"},
        {cfg.gain_master_db, "gains_db.master"},
    };
    for (const auto& [v, key] : finite_gains) check_finite(v, key);

    check(cfg.clip.mass_lo <= cfg.clip.mass_hi, "clip.mass: lo must not exceed hi");
    check(cfg.clip.sfr_lo <= cfg.clip.sfr_hi, "clip.sfr: lo must not exceed hi");
    check(cfg.clip.sfr_lo >= 0.0, "clip.sfr: thresholds must be non-negative");

    // Exponential maps need positive endpoints; linear ones only finite.
    const std::tuple<double, double, const char*> exp_endpoints[] = {
        {cfg.maps.f0_hz_lo, cfg.maps.f0_hz_hi, "event_maps.f0_hz"},
        {cfg.maps.fm_hz_lo, cfg.maps.fm_hz_hi, "event_maps.fm_hz"},
        {cfg.maps.deviation_hz_lo, cfg.maps.deviation_hz_hi, "event_maps.deviation_hz"},
    };
    for (const auto& [lo, hi, key] : exp_endpoints)
        check(lo > 0.0 && hi > 0.0, std::string(key) + ": endpoints must be positive");
    check_finite(cfg.maps.level_db_lo, "event_maps.level_db");
    check_finite(cfg.maps.level_db_hi, "event_maps.level_db");
    check(cfg.maps.release_s_lo > 0.0 && cfg.maps.release_s_hi > 0.0,
          "event_maps.release_s: endpoints must be positive");

    check(cfg.stats_window > 0.0 && cfg.stats_window <= 1.0,
          "statistics.window: must lie in (0, 1]");
    check(cfg.stats_grid >= 2, "statistics.grid: needs at least two points");
    check(cfg.histogram_bins >= 1, "histogram_bins: needs at least one bin");

    const std::pair<const DroneVoice*, const char*> voices[] = {
        {&cfg.drone.mass, "statistics.*.mass"},
        {&cfg.drone.brightness, "statistics.*.brightness"},
        {&cfg.drone.sfr, "statistics.*.sfr"},
    };
    for (const auto& [voice, key] : voices) {
        check(voice->multiplier > 0.0, std::string(key) + ": multiplier must be positive");
        check(voice->pan_position >= 0.0 && voice->pan_position <= 1.0,
              std::string(key) + ": pan must lie in [0, 1]");
        check_finite(voice->gain_db, std::string(key) + ": gain");
    }
    check(cfg.drone.inv_q_start > 0.0 && cfg.drone.inv_q_end > 0.0,
          "statistics.inv_q: values must be positive");

    check(cfg.icons.percussion_start_hz > 0.0, "icons.percussion.start_hz: must be positive");
    check(cfg.icons.percussion_drop_ratio > 0.0, "icons.percussion.drop_ratio: must be positive");
    check(cfg.icons.percussion_drop_time_s > 0.0, "icons.percussion.drop_time_s: must be positive");
    check(cfg.icons.percussion_release_s > 0.0, "icons.percussion.release_s: must be positive");
    check(cfg.icons.percussion_noise_s > 0.0, "icons.percussion.noise_s: must be positive");
    check(cfg.icons.bell_fundamental_hz > 0.0, "icons.bell.fundamental_hz: must be positive");
    check(!cfg.icons.bell_ratios.empty(), "icons.bell.ratios: must not be empty");
    check(cfg.icons.bell_ratios.size() == cfg.icons.bell_levels.size() &&
              cfg.icons.bell_ratios.size() == cfg.icons.bell_release_scale.size(),
          "icons.bell: ratios, levels and release_scale must have equal length");
    check(cfg.icons.bell_release_s > 0.0, "icons.bell.release_s: must be positive");
    check(cfg.icons.rumble_band_lo_hz > 0.0 && cfg.icons.rumble_band_hi_hz > 0.0,
          "icons.rumble.band: endpoints must be positive");
    check(cfg.icons.rumble_q > 0.0, "icons.rumble.q: must be positive");
    check(cfg.icons.rumble_rate_fast_hz > 0.0 && cfg.icons.rumble_rate_slow_hz > 0.0,
          "icons.rumble.rate: must be positive");
    check(cfg.icons.rumble_drive_max >= 0.0, "icons.rumble.drive_max: must be non-negative");
    check(cfg.icons.glitch_duration_s > 0.0, "icons.glitch.duration_s: must be positive");
    check(cfg.icons.glitch_burst_min_ms > 0.0 &&
              cfg.icons.glitch_burst_max_ms >= cfg.icons.glitch_burst_min_ms,
          "icons.glitch.burst: need 0 < min <= max");
    check(cfg.icons.glitch_bursts >= 0, "icons.glitch.bursts: must be non-negative");
    check(cfg.icons.glitch_q > 0.0, "icons.glitch.q: must be positive");

    const std::pair<double, const char*> sends[] = {
        {cfg.reverb.send_galaxies_db, "reverb.sends_db.galaxies"},
        {cfg.reverb.send_statistics_db, "reverb.sends_db.statistics"},
        {cfg.reverb.send_outliers_db, "reverb.sends_db.outliers"},
    };
    for (const auto& [v, key] : sends) check_finite(v, key);
}

} // namespace zsonify
