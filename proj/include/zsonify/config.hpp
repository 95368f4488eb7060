#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "zsonify/catalog.hpp"
#include "zsonify/galaxy_layer.hpp"
#include "zsonify/outlier_layer.hpp"
#include "zsonify/preprocess.hpp"
#include "zsonify/statistics_layer.hpp"

namespace zsonify {

/// Fixed-parameter reverb stage; only the per-layer sends are exposed.
/// Off by default.
struct ReverbConfig {
    bool enabled = false;
    double send_galaxies_db = -14.0;
    double send_statistics_db = -6.0; // background drones get more depth
    double send_outliers_db = -14.0;
};

/// Everything the renderer needs, with defaults matching the standard
/// mapping tables. Any field can be overridden from the JSON config file.
struct RenderConfig {
    double duration_s = 1500.0;
    int sample_rate = 44100;
    int bit_depth = 24; // 16, 24 or 32
    int threads = 0;    // 0 = hardware concurrency

    double gain_galaxies_db = 0.0;
    double gain_statistics_db = -18.0;
    double gain_outliers_db = 0.0;
    double gain_master_db = 0.0;

    CatalogSchema schema;
    QualityCuts quality;
    BiasCuts bias;
    ClipThresholds clip;
    EventMaps maps; // maps.duration_s is kept equal to duration_s

    double stats_window = 0.05;
    std::size_t stats_grid = 256;
    int histogram_bins = 40;

    DroneSpec drone;
    IconRecipes icons;
    ReverbConfig reverb;

    std::string catalog_path;
    std::string out_path = "render.wav";
    std::string report_dir;
};

/// Loads and validates a config file. Missing keys take defaults; unknown
/// keys and out-of-range values raise ConfigError naming the key. An empty
/// file is the all-defaults config.
RenderConfig load_config(const std::string& path);

/// Same, from an already-parsed JSON object (used by tests).
RenderConfig config_from_json(const nlohmann::json& j);

void validate_config(const RenderConfig& cfg);

/// Report directory precedence: explicit CLI value, then the config file,
/// then the ZSONIFY_REPORT_DIR environment variable, else empty.
std::string resolve_report_dir(const std::string& cli_value,
                               const std::string& config_value);

} // namespace zsonify
