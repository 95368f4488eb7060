#include "zsonify/render.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zsonify/dsp.hpp"
#include "zsonify/galaxy_layer.hpp"
#include "zsonify/outlier_layer.hpp"
#include "zsonify/reverb.hpp"
#include "zsonify/statistics_layer.hpp"
#include "zsonify/wav.hpp"

namespace zsonify {

namespace {

// Tags any stage failure with the stage name so CLI diagnostics say where
// the pipeline stopped.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(name) + ": " + e.what());
    }
}

void accumulate(AudioBuffer& into, const AudioBuffer& layer, double gain) {
    into.ensure_frames(layer.frames());
    for (std::size_t i = 0; i < layer.frames(); ++i) {
        into.left[i] += gain * layer.left[i];
        into.right[i] += gain * layer.right[i];
    }
}

void count_outliers(const Population& pop, RenderManifest& m) {
    for (const auto& g : pop.galaxies) {
        switch (g.flag) {
            case OutlierKind::none: break;
            case OutlierKind::mass_low: ++m.outliers_mass_low; break;
            case OutlierKind::mass_high: ++m.outliers_mass_high; break;
            case OutlierKind::sfr_low: ++m.outliers_sfr_low; break;
            case OutlierKind::sfr_high: ++m.outliers_sfr_high; break;
            case OutlierKind::bright: ++m.outliers_bright; break;
        }
    }
    m.flagged_total = m.outliers_mass_low + m.outliers_mass_high + m.outliers_sfr_low +
                      m.outliers_sfr_high + m.outliers_bright;
}

void write_reports(const RenderConfig& cfg, const Population& pop,
                   const FeatureStats& stats,
                   const std::vector<GalaxyRecord>& parsed) {
    if (cfg.report_dir.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(cfg.report_dir);
    const fs::path dir(cfg.report_dir);

    export_summary(pop.galaxies, stats, (dir / "feature_histograms.csv").string(),
                   (dir / "feature_stats.csv").string(), cfg.histogram_bins);

    {
        std::ofstream out(dir / "digest.csv");
        write_digest(catalog_digest(parsed), out, cfg.schema.delimiter);
    }
    {
        std::ofstream out(dir / "events.csv");
        write_event_log(pop.galaxies, cfg.maps, out);
    }
    {
        std::ofstream out(dir / "icons.csv");
        write_icon_log(pop.galaxies, cfg.maps, out);
    }
    {
        const DroneCurves curves =
            drone_frequency_curves(stats, cfg.drone, cfg.duration_s, cfg.sample_rate);
        const std::vector<double> inv_q =
            q_trajectory(cfg.duration_s, cfg.sample_rate, cfg.drone);
        std::ofstream out(dir / "drone_curves.csv");
        write_drone_curves(curves, inv_q, cfg.sample_rate, out);
    }
}

void write_manifest_file(const RenderConfig& cfg, const RenderManifest& m) {
    if (cfg.report_dir.empty()) return;
    std::ofstream out(std::filesystem::path(cfg.report_dir) / "manifest.txt");
    out << manifest_text(m);
}

} // namespace

Population preprocess_catalog(const std::vector<GalaxyRecord>& records,
                              const RenderConfig& cfg, RenderManifest& manifest) {
    const auto quality = quality_filter(records, cfg.quality);
    manifest.after_quality = quality.size();
    const auto unbiased = bias_filter(quality, cfg.bias);
    manifest.after_bias = unbiased.size();
    Population pop = normalize_features(unbiased, cfg.clip);
    count_outliers(pop, manifest);
    manifest.warnings.insert(manifest.warnings.end(), pop.warnings.begin(),
                             pop.warnings.end());
    return pop;
}

RenderManifest preprocess_reports(const RenderConfig& cfg) {
    RenderManifest manifest;
    const ParseResult parsed = stage("catalog", [&] {
        return parse_catalog_file(cfg.catalog_path, cfg.schema);
    });
    manifest.rows_parsed = parsed.records.size();
    manifest.rows_rejected = parsed.rejected.size();

    const Population pop =
        stage("preprocess", [&] { return preprocess_catalog(parsed.records, cfg, manifest); });
    const FeatureStats stats = stage("preprocess", [&] {
        return moving_average(pop.galaxies, cfg.stats_window, cfg.stats_grid);
    });
    stage("reports", [&] {
        write_reports(cfg, pop, stats, parsed.records);
        write_manifest_file(cfg, manifest);
        return 0;
    });
    return manifest;
}

RenderManifest render_full(const RenderConfig& cfg) {
    validate_config(cfg);
    RenderManifest manifest;

    const ParseResult parsed = stage("catalog", [&] {
        return parse_catalog_file(cfg.catalog_path, cfg.schema);
    });
    manifest.rows_parsed = parsed.records.size();
    manifest.rows_rejected = parsed.rejected.size();

    const Population pop =
        stage("preprocess", [&] { return preprocess_catalog(parsed.records, cfg, manifest); });
    const FeatureStats stats = stage("preprocess", [&] {
        return moving_average(pop.galaxies, cfg.stats_window, cfg.stats_grid);
    });
    manifest.rendered_events = pop.galaxies.size() - manifest.flagged_total;
    manifest.rendered_icons = manifest.flagged_total;

    AudioBuffer master;
    master.sample_rate = cfg.sample_rate;
    master.ensure_frames(
        static_cast<std::size_t>(std::llround(cfg.duration_s * cfg.sample_rate)));
    AudioBuffer reverb_send;
    reverb_send.sample_rate = cfg.sample_rate;

    {
        const AudioBuffer galaxies = stage("layer_galaxies", [&] {
            return render_galaxy_layer(pop.galaxies, cfg.maps, cfg.sample_rate, cfg.threads);
        });
        accumulate(master, galaxies, dsp::db_to_linear(cfg.gain_galaxies_db));
        if (cfg.reverb.enabled)
            accumulate(reverb_send, galaxies, dsp::db_to_linear(cfg.gain_galaxies_db +
                                                                cfg.reverb.send_galaxies_db));
    }
    {
        const AudioBuffer drones = stage("layer_statistics", [&] {
            return render_statistics_layer(stats, cfg.drone, cfg.duration_s, cfg.sample_rate);
        });
        accumulate(master, drones, dsp::db_to_linear(cfg.gain_statistics_db));
        if (cfg.reverb.enabled)
            accumulate(reverb_send, drones, dsp::db_to_linear(cfg.gain_statistics_db +
                                                              cfg.reverb.send_statistics_db));
    }
    {
        const AudioBuffer icons = stage("layer_outliers", [&] {
            return render_outlier_layer(pop.galaxies, cfg.icons, cfg.maps, cfg.sample_rate,
                                        cfg.threads);
        });
        accumulate(master, icons, dsp::db_to_linear(cfg.gain_outliers_db));
        if (cfg.reverb.enabled)
            accumulate(reverb_send, icons, dsp::db_to_linear(cfg.gain_outliers_db +
                                                             cfg.reverb.send_outliers_db));
    }

    if (cfg.reverb.enabled) {
        const AudioBuffer wet = stage("reverb", [&] { return schroeder_reverb(reverb_send); });
        accumulate(master, wet, 1.0);
    }

    stage("master", [&] {
        const double gain = dsp::db_to_linear(cfg.gain_master_db);
        double peak = 0.0;
        std::size_t clipped = 0;
        for (auto* channel : {&master.left, &master.right}) {
            for (auto& v : *channel) {
                v *= gain;
                peak = std::max(peak, std::abs(v));
                if (v > 1.0) {
                    v = 1.0;
                    ++clipped;
                } else if (v < -1.0) {
                    v = -1.0;
                    ++clipped;
                }
            }
        }
        manifest.peak_level = peak;
        manifest.clipped_samples = clipped;
        manifest.length_seconds = master.seconds();
        return 0;
    });

    stage("output", [&] {
        write_wav(master, cfg.out_path, cfg.bit_depth);
        write_reports(cfg, pop, stats, parsed.records);
        write_manifest_file(cfg, manifest);
        return 0;
    });
    return manifest;
}

std::string manifest_text(const RenderManifest& m) {
    std::ostringstream out;
    out << "rows parsed:        " << m.rows_parsed << "\n";
    out << "rows rejected:      " << m.rows_rejected << "\n";
    out << "after quality cut:  " << m.after_quality << "\n";
    out << "after bias cut:     " << m.after_bias << "\n";
    out << "outliers mass low/high:  " << m.outliers_mass_low << "/" << m.outliers_mass_high
        << "\n";
    out << "outliers sfr low/high:   " << m.outliers_sfr_low << "/" << m.outliers_sfr_high
        << "\n";
    out << "outliers bright:         " << m.outliers_bright << "\n";
    out << "flagged total:      " << m.flagged_total << "\n";
    out << "events rendered:    " << m.rendered_events << "\n";
    out << "icons rendered:     " << m.rendered_icons << "\n";
    out << "peak level:         " << m.peak_level << "\n";
    out << "clipped samples:    " << m.clipped_samples << "\n";
    out << "length seconds:     " << m.length_seconds << "\n";
    for (const auto& w : m.warnings) out << "warning: " << w << "\n";
    return out.str();
}

} // namespace zsonify
