#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "support/fixtures.hpp"
#include "zsonify/config.hpp"
#include "zsonify/dsp.hpp"
#include "zsonify/errors.hpp"
#include "zsonify/galaxy_layer.hpp"
#include "zsonify/outlier_layer.hpp"
#include "zsonify/render.hpp"
#include "zsonify/statistics_layer.hpp"
#include "zsonify/wav.hpp"

using namespace zsonify;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("empty config file yields all defaults") {
    TempDir dir("zsonify_cfg_empty");
    write_file(dir.file("empty.json"), "");
    const RenderConfig cfg = load_config(dir.file("empty.json"));
    CHECK(cfg.duration_s == 1500.0);
    CHECK(cfg.sample_rate == 44100);
    CHECK(cfg.bit_depth == 24);
    CHECK(cfg.maps.duration_s == 1500.0);
    CHECK(cfg.maps.f0_hz_lo == 7000.0);
    CHECK(cfg.clip.mass_lo == 9.25);
    CHECK(cfg.drone.brightness.multiplier == 2000.0);
    CHECK(cfg.gain_statistics_db == -18.0);
    CHECK_FALSE(cfg.reverb.enabled);
}

TEST_CASE("unknown keys are rejected by name") {
    CHECK_THROWS_WITH_AS(config_from_json(json::parse(R"({"duration": 10})")),
                         "unknown config key: duration", ConfigError);
    CHECK_THROWS_WITH_AS(
        config_from_json(json::parse(R"({"audio": {"durration_s": 10}})")),
        "unknown config key: audio.durration_s", ConfigError);
    CHECK_THROWS_WITH_AS(
        config_from_json(json::parse(R"({"statistics": {"seeds": {"made_up": 1}}})")),
        "unknown config key: statistics.seeds.made_up", ConfigError);
}

TEST_CASE("config validation names the bad key") {
    CHECK_THROWS_WITH_AS(config_from_json(json::parse(R"({"audio": {"duration_s": -1}})")),
                         "audio.duration_s: must be positive", ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"audio": {"bit_depth": 12}})")),
                    ConfigError);
    CHECK_THROWS_AS(
        config_from_json(json::parse(R"({"event_maps": {"f0_hz": [0.0, 400.0]}})")),
        ConfigError);
    CHECK_THROWS_AS(
        config_from_json(json::parse(R"({"statistics": {"window": 1.5}})")),
        ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"clip": {"mass": [11.0, 9.0]}})")),
                    ConfigError);
}

TEST_CASE("config overrides flow through to the event maps") {
    const RenderConfig cfg = config_from_json(json::parse(
        R"({"audio": {"duration_s": 60}, "event_maps": {"f0_hz": [14000.0, 800.0]}})"));
    CHECK(cfg.maps.duration_s == 60.0);
    ProcessedGalaxy g;
    g.mass_n = 0.0;
    g.sfr12_n = g.brightness_n = g.ra_n = g.tl_n = 0.5;
    CHECK(event_params(g, cfg.maps).f0_hz == 14000.0);
}

TEST_CASE("config json types are checked") {
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"audio": {"sample_rate": "fast"}})")),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"audio": 3})")), ConfigError);
    CHECK_THROWS_AS(
        config_from_json(json::parse(R"({"catalog": {"delimiter": ",,"}})")),
        ConfigError);
    CHECK_THROWS_AS(
        config_from_json(json::parse(R"({"event_maps": {"f0_hz": [1.0]}})")),
        ConfigError);
}

TEST_CASE("report dir resolution order") {
    unsetenv("ZSONIFY_REPORT_DIR");
    CHECK(resolve_report_dir("cli", "cfg") == "cli");
    CHECK(resolve_report_dir("", "cfg") == "cfg");
    CHECK(resolve_report_dir("", "") == "");
    setenv("ZSONIFY_REPORT_DIR", "/tmp/from-env", 1);
    CHECK(resolve_report_dir("", "") == "/tmp/from-env");
    CHECK(resolve_report_dir("", "cfg") == "cfg");
    unsetenv("ZSONIFY_REPORT_DIR");
}

TEST_CASE("wav files have the documented layout") {
    TempDir dir("zsonify_wav");
    AudioBuffer buf;
    buf.sample_rate = 44100;
    buf.left.assign(44100, 0.0);
    buf.right.assign(44100, 0.0);
    const std::string path = dir.file("silence.wav");
    write_wav(buf, path, 16);

    const std::string bytes = read_file(path);
    REQUIRE(bytes.size() == 44 + 176400); // header + 1 s stereo 16-bit
    CHECK(bytes.substr(0, 4) == "RIFF");
    CHECK(bytes.substr(8, 4) == "WAVE");
    CHECK(bytes.substr(36, 4) == "data");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t data_size =
        p[40] | (p[41] << 8) | (p[42] << 16) | (std::uint32_t(p[43]) << 24);
    CHECK(data_size == 176400);
}

TEST_CASE("full scale encodes to the maximum positive code") {
    TempDir dir("zsonify_wav_fs");
    AudioBuffer buf;
    buf.sample_rate = 8000;
    buf.left = {1.0, -1.0, 0.0};
    buf.right = {0.5, 0.25, -0.5};
    const std::string path = dir.file("fs.wav");
    write_wav(buf, path, 16);
    const std::string bytes = read_file(path);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + 44;
    const auto code = [&](int i) {
        return static_cast<std::int16_t>(p[2 * i] | (p[2 * i + 1] << 8));
    };
    CHECK(code(0) == 32767);  // left[0] = +1.0
    CHECK(code(2) == -32767); // left[1] = -1.0
}

TEST_CASE("wav round trip stays within one quantization step") {
    TempDir dir("zsonify_wav_rt");
    AudioBuffer buf;
    buf.sample_rate = 22050;
    testsupport::FixtureRng rng(41);
    for (int i = 0; i < 2000; ++i) {
        buf.left.push_back(rng.uniform(-1.0, 1.0));
        buf.right.push_back(rng.uniform(-1.0, 1.0));
    }
    for (int depth : {16, 24, 32}) {
        const std::string path = dir.file("rt.wav");
        write_wav(buf, path, depth);
        const WavData back = read_wav(path);
        CHECK(back.sample_rate == 22050);
        CHECK(back.bit_depth == depth);
        REQUIRE(back.left.size() == buf.left.size());
        const double step = 1.0 / ((1LL << (depth - 1)) - 1);
        for (std::size_t i = 0; i < buf.left.size(); ++i) {
            CHECK(std::abs(back.left[i] - buf.left[i]) <= step);
            CHECK(std::abs(back.right[i] - buf.right[i]) <= step);
        }
    }
}

TEST_CASE("render_full produces a stereo file, reports and sane counts") {
    TempDir dir("zsonify_render");
    write_file(dir.file("catalog.csv"), testsupport::synthetic_catalog(40, 99));

    RenderConfig cfg;
    cfg.duration_s = 5.0;
    cfg.maps.duration_s = 5.0;
    cfg.stats_window = 0.5; // 40 rows: wide windows keep every average populated
    cfg.threads = 1;
    cfg.catalog_path = dir.file("catalog.csv");
    cfg.out_path = dir.file("out.wav");
    cfg.report_dir = (dir.path / "reports").string();

    const RenderManifest m = render_full(cfg);
    CHECK(m.rows_parsed == 40);
    CHECK(m.rows_rejected == 0);
    CHECK(m.after_quality <= m.rows_parsed);
    CHECK(m.after_bias <= m.after_quality);
    CHECK(m.flagged_total == m.outliers_mass_low + m.outliers_mass_high +
                                 m.outliers_sfr_low + m.outliers_sfr_high +
                                 m.outliers_bright);
    CHECK(m.rendered_events + m.rendered_icons == m.after_bias);
    CHECK(m.length_seconds >= 5.0);
    CHECK(m.peak_level > 0.0);

    const WavData wav = read_wav(cfg.out_path);
    CHECK(wav.sample_rate == 44100);
    CHECK(wav.bit_depth == 24);
    CHECK(wav.left.size() == static_cast<std::size_t>(std::llround(m.length_seconds * 44100)));

    for (const char* name : {"feature_histograms.csv", "feature_stats.csv", "digest.csv",
                             "events.csv", "icons.csv", "drone_curves.csv", "manifest.txt"})
        CHECK(fs::exists(dir.path / "reports" / name));

    const std::string manifest = manifest_text(m);
    CHECK(manifest.find("rows parsed:        40") != std::string::npos);
}

TEST_CASE("render_full equals the gain-weighted sum of its layers") {
    TempDir dir("zsonify_additivity");
    write_file(dir.file("catalog.csv"), testsupport::synthetic_catalog(25, 7));

    RenderConfig cfg;
    cfg.duration_s = 3.0;
    cfg.maps.duration_s = 3.0;
    cfg.stats_window = 0.5;
    cfg.threads = 1;
    cfg.gain_galaxies_db = -3.0;
    cfg.gain_statistics_db = -12.0;
    cfg.gain_outliers_db = -6.0;
    cfg.gain_master_db = -6.0; // keep the limiter idle
    cfg.catalog_path = dir.file("catalog.csv");
    cfg.out_path = dir.file("mix.wav");

    const RenderManifest m = render_full(cfg);
    CHECK(m.clipped_samples == 0);

    // rebuild the three layers through the public module APIs
    const auto parsed = parse_catalog_file(cfg.catalog_path, cfg.schema);
    RenderManifest scratch;
    const Population pop = preprocess_catalog(parsed.records, cfg, scratch);
    const FeatureStats stats = moving_average(pop.galaxies, cfg.stats_window, cfg.stats_grid);
    const AudioBuffer galaxies =
        render_galaxy_layer(pop.galaxies, cfg.maps, cfg.sample_rate, 1);
    const AudioBuffer drones =
        render_statistics_layer(stats, cfg.drone, cfg.duration_s, cfg.sample_rate);
    const AudioBuffer icons =
        render_outlier_layer(pop.galaxies, cfg.icons, cfg.maps, cfg.sample_rate, 1);

    const WavData wav = read_wav(cfg.out_path);
    const double g_gal = dsp::db_to_linear(cfg.gain_galaxies_db);
    const double g_sta = dsp::db_to_linear(cfg.gain_statistics_db);
    const double g_out = dsp::db_to_linear(cfg.gain_outliers_db);
    const double g_mst = dsp::db_to_linear(cfg.gain_master_db);
    const double step = 1.5 / ((1LL << 23) - 1);

    auto at = [](const AudioBuffer& b, std::size_t i) {
        return i < b.frames() ? b.left[i] : 0.0;
    };
    for (std::size_t i = 0; i < wav.left.size(); i += 97) {
        const double expected =
            g_mst * (g_gal * at(galaxies, i) + g_sta * at(drones, i) + g_out * at(icons, i));
        CHECK(std::abs(wav.left[i] - expected) <= step);
    }
}

TEST_CASE("muting the foreground layers leaves the statistics drone") {
    TempDir dir("zsonify_mute");
    write_file(dir.file("catalog.csv"), testsupport::synthetic_catalog(25, 7));

    RenderConfig cfg;
    cfg.duration_s = 2.0;
    cfg.maps.duration_s = 2.0;
    cfg.stats_window = 0.5;
    cfg.threads = 1;
    cfg.gain_galaxies_db = -300.0; // below one quantization step
    cfg.gain_outliers_db = -300.0;
    cfg.catalog_path = dir.file("catalog.csv");
    cfg.out_path = dir.file("muted.wav");
    render_full(cfg);

    const auto parsed = parse_catalog_file(cfg.catalog_path, cfg.schema);
    RenderManifest scratch;
    const Population pop = preprocess_catalog(parsed.records, cfg, scratch);
    const FeatureStats stats = moving_average(pop.galaxies, cfg.stats_window, cfg.stats_grid);
    const AudioBuffer drones =
        render_statistics_layer(stats, cfg.drone, cfg.duration_s, cfg.sample_rate);
    const double gain = dsp::db_to_linear(cfg.gain_statistics_db);

    const WavData wav = read_wav(cfg.out_path);
    const double step = 1.5 / ((1LL << 23) - 1);
    for (std::size_t i = 0; i < drones.frames(); i += 31) {
        CHECK(std::abs(wav.left[i] - gain * drones.left[i]) <= step);
        CHECK(std::abs(wav.right[i] - gain * drones.right[i]) <= step);
    }
}

TEST_CASE("render_full is deterministic across thread counts") {
    TempDir dir("zsonify_threads");
    write_file(dir.file("catalog.csv"), testsupport::synthetic_catalog(30, 15));

    RenderConfig cfg;
    cfg.duration_s = 2.0;
    cfg.maps.duration_s = 2.0;
    cfg.stats_window = 0.5;
    cfg.catalog_path = dir.file("catalog.csv");

    cfg.threads = 1;
    cfg.out_path = dir.file("one.wav");
    render_full(cfg);
    cfg.threads = 3;
    cfg.out_path = dir.file("three.wav");
    render_full(cfg);

    CHECK(read_file(dir.file("one.wav")) == read_file(dir.file("three.wav")));
}

TEST_CASE("stage failures carry the stage name") {
    RenderConfig cfg;
    cfg.catalog_path = "/nonexistent/catalog.csv";
    CHECK_THROWS_WITH_AS(render_full(cfg),
                         "catalog: cannot open catalog file: /nonexistent/catalog.csv",
                         std::runtime_error);
}

TEST_CASE("reverb adds a tail without breaking determinism") {
    TempDir dir("zsonify_reverb");
    write_file(dir.file("catalog.csv"), testsupport::synthetic_catalog(10, 3));

    RenderConfig cfg;
    cfg.duration_s = 2.0;
    cfg.maps.duration_s = 2.0;
    cfg.stats_window = 0.5;
    cfg.threads = 1;
    cfg.catalog_path = dir.file("catalog.csv");
    cfg.reverb.enabled = true;
    cfg.out_path = dir.file("wet1.wav");
    render_full(cfg);
    cfg.out_path = dir.file("wet2.wav");
    render_full(cfg);
    CHECK(read_file(dir.file("wet1.wav")) == read_file(dir.file("wet2.wav")));

    cfg.reverb.enabled = false;
    cfg.out_path = dir.file("dry.wav");
    render_full(cfg);
    CHECK(read_file(dir.file("dry.wav")) != read_file(dir.file("wet1.wav")));
}

TEST_CASE("preprocess_reports writes reports without audio") {
    TempDir dir("zsonify_pre");
    write_file(dir.file("catalog.csv"), testsupport::synthetic_catalog(20, 5));

    RenderConfig cfg;
    cfg.stats_window = 0.5;
    cfg.catalog_path = dir.file("catalog.csv");
    cfg.report_dir = (dir.path / "reports").string();
    const RenderManifest m = preprocess_reports(cfg);
    CHECK(m.rows_parsed == 20);
    CHECK(fs::exists(dir.path / "reports" / "feature_stats.csv"));
    CHECK_FALSE(fs::exists(dir.path / "out.wav"));
}
