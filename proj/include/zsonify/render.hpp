#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zsonify/config.hpp"
#include "zsonify/preprocess.hpp"

namespace zsonify {

/// Counters and measurements from one full render.
struct RenderManifest {
    std::size_t rows_parsed = 0;
    std::size_t rows_rejected = 0;
    std::size_t after_quality = 0;
    std::size_t after_bias = 0;

    std::size_t outliers_mass_low = 0;
    std::size_t outliers_mass_high = 0;
    std::size_t outliers_sfr_low = 0;
    std::size_t outliers_sfr_high = 0;
    std::size_t outliers_bright = 0;
    std::size_t flagged_total = 0;

    std::size_t rendered_events = 0;
    std::size_t rendered_icons = 0;

    double peak_level = 0.0; // linear, before the limiter
    std::size_t clipped_samples = 0;
    double length_seconds = 0.0;

    std::vector<std::string> warnings;
};

/// Quality filter -> bias filter -> clip/normalize, with stage counts
/// recorded into the manifest.
Population preprocess_catalog(const std::vector<GalaxyRecord>& records,
                              const RenderConfig& cfg, RenderManifest& manifest);

/// Runs the complete pipeline: ingest, preprocess, three layers, mix,
/// optional reverb, limiter, file output and any enabled reports.
/// Errors are tagged with the stage that raised them.
RenderManifest render_full(const RenderConfig& cfg);

/// Preprocessing and report files only, no audio.
RenderManifest preprocess_reports(const RenderConfig& cfg);

std::string manifest_text(const RenderManifest& m);

} // namespace zsonify
