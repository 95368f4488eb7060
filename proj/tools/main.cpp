#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "zsonify/catalog.hpp"
#include "zsonify/config.hpp"
#include "zsonify/errors.hpp"
#include "zsonify/render.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string catalog_path;
    std::string report_dir;
    double duration = 0.0; // 0 = keep config value
    int threads = -1;      // -1 = keep config value
    std::uint64_t seed = 0;
    bool seed_set = false;
};

zsonify::RenderConfig build_config(const CommonArgs& args) {
    zsonify::RenderConfig cfg = args.config_path.empty()
                                    ? zsonify::RenderConfig{}
                                    : zsonify::load_config(args.config_path);
    if (!args.catalog_path.empty()) cfg.catalog_path = args.catalog_path;
    if (args.duration != 0.0) { // 0 = keep config; negatives fail validation
        cfg.duration_s = args.duration;
        cfg.maps.duration_s = args.duration;
    }
    if (args.threads >= 0) cfg.threads = args.threads;
    cfg.report_dir = zsonify::resolve_report_dir(args.report_dir, cfg.report_dir);
    if (args.seed_set) {
        cfg.drone.mass.seed = args.seed;
        cfg.drone.brightness.seed = args.seed + 1;
        cfg.drone.sfr.seed = args.seed + 2;
        cfg.icons.percussion_seed = args.seed + 101;
        cfg.icons.rumble_seed = args.seed + 102;
        cfg.icons.glitch_seed = args.seed + 103;
    }
    zsonify::validate_config(cfg);
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool catalog_required) {
    cmd->add_option("--config", args.config_path, "JSON config file (defaults when omitted)");
    auto* catalog =
        cmd->add_option("--catalog", args.catalog_path, "galaxy catalog, delimited text");
    if (catalog_required) catalog->required();
    cmd->add_option("--report-dir", args.report_dir,
                    "directory for report files (env ZSONIFY_REPORT_DIR)");
    cmd->add_option("--duration", args.duration, "timeline length in seconds");
    cmd->add_option("--threads", args.threads, "worker threads (0 = all cores)");
    cmd->add_option("--seed", args.seed, "base noise seed")->each([&](const std::string&) {
        args.seed_set = true;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"galaxy catalog sonification renderer"};
    app.require_subcommand(1);

    CommonArgs render_args;
    std::string out_path;
    auto* render_cmd = app.add_subcommand("render", "run the full pipeline to a wav file");
    add_common(render_cmd, render_args, true);
    render_cmd->add_option("--out", out_path, "output wav path");

    CommonArgs pre_args;
    auto* pre_cmd =
        app.add_subcommand("preprocess", "run filters and statistics, write reports only");
    add_common(pre_cmd, pre_args, true);

    std::string inspect_catalog;
    std::string inspect_config;
    auto* inspect_cmd = app.add_subcommand("inspect", "print a per-field catalog digest");
    inspect_cmd->add_option("--catalog", inspect_catalog, "galaxy catalog")->required();
    inspect_cmd->add_option("--config", inspect_config,
                            "JSON config file (for the column schema)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (render_cmd->parsed()) {
            zsonify::RenderConfig cfg = build_config(render_args);
            if (!out_path.empty()) cfg.out_path = out_path;
            const zsonify::RenderManifest manifest = zsonify::render_full(cfg);
            std::cout << zsonify::manifest_text(manifest);
            std::cout << "wrote " << cfg.out_path << "\n";
        } else if (pre_cmd->parsed()) {
            zsonify::RenderConfig cfg = build_config(pre_args);
            if (cfg.report_dir.empty()) {
                std::cerr << "preprocess: no report directory given (use --report-dir)\n";
                return 1;
            }
            const zsonify::RenderManifest manifest = zsonify::preprocess_reports(cfg);
            std::cout << zsonify::manifest_text(manifest);
        } else if (inspect_cmd->parsed()) {
            zsonify::CatalogSchema schema;
            if (!inspect_config.empty()) schema = zsonify::load_config(inspect_config).schema;
            const auto parsed = zsonify::parse_catalog_file(inspect_catalog, schema);
            for (const auto& r : parsed.rejected)
                std::cerr << "rejected row " << r.row << " (" << r.column
                          << "): " << r.message << "\n";
            zsonify::write_digest(zsonify::catalog_digest(parsed.records), std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
