#include "zsonify/preprocess.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "zsonify/errors.hpp"

namespace zsonify {

namespace {

constexpr double kUniverseAgeGyr = 13.8;

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

template <typename Get>
void normalize_feature(std::vector<ProcessedGalaxy>& galaxies, const char* name,
                       Get get, std::vector<std::string>& warnings) {
    std::vector<double> values(galaxies.size());
    for (std::size_t i = 0; i < galaxies.size(); ++i) values[i] = get(galaxies[i]);
    if (!min_max_scale(values))
        warnings.push_back(std::string("feature ") + name +
                           " is constant across the population; normalized to 0.5");
    for (std::size_t i = 0; i < galaxies.size(); ++i) get(galaxies[i]) = values[i];
}

} // namespace

bool min_max_scale(std::span<double> values) {
    if (values.empty()) return true;
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) {
        for (auto& v : values) v = 0.5;
        return false;
    }
    const double span = hi - lo;
    for (auto& v : values) v = (v - lo) / span;
    return true;
}

const char* outlier_kind_name(OutlierKind kind) {
    switch (kind) {
        case OutlierKind::none: return "none";
        case OutlierKind::mass_low: return "mass_low";
        case OutlierKind::mass_high: return "mass_high";
        case OutlierKind::sfr_low: return "sfr_low";
        case OutlierKind::sfr_high: return "sfr_high";
        case OutlierKind::bright: return "bright";
    }
    return "unknown";
}

std::vector<GalaxyRecord> quality_filter(const std::vector<GalaxyRecord>& records,
                                         const QualityCuts& cuts) {
    std::vector<GalaxyRecord> kept;
    kept.reserve(records.size());
    for (const auto& r : records) {
        if (r.abs_magnitude < cuts.magnitude_floor || r.stellar_mass <= cuts.mass_floor)
            continue;
        kept.push_back(r);
    }
    return kept;
}

std::vector<GalaxyRecord> bias_filter(const std::vector<GalaxyRecord>& records,
                                      const BiasCuts& cuts) {
    std::vector<GalaxyRecord> kept;
    kept.reserve(records.size());
    for (const auto& r : records) {
        if (r.age_gyr < cuts.age_min_gyr || r.abs_magnitude > cuts.magnitude_ceiling)
            continue;
        kept.push_back(r);
    }
    return kept;
}

double transform_sfr(double sfr) {
    if (sfr < 0.0) throw std::domain_error("transform_sfr: negative star formation rate");
    return std::pow(sfr, 1.0 / 12.0);
}

double lookback_time(double age_gyr) {
    if (age_gyr > kUniverseAgeGyr)
        throw std::domain_error("lookback_time: age exceeds the age of the Universe");
    return kUniverseAgeGyr - age_gyr;
}

double invert_magnitude(double m) { return -m; }

Clipped clip_and_flag(double value, ClipVariable variable,
                      const ClipThresholds& thresholds) {
    switch (variable) {
        case ClipVariable::mass:
            if (value < thresholds.mass_lo) return {thresholds.mass_lo, OutlierKind::mass_low};
            if (value > thresholds.mass_hi) return {thresholds.mass_hi, OutlierKind::mass_high};
            return {value, OutlierKind::none};
        case ClipVariable::sfr:
            if (value < thresholds.sfr_lo) return {thresholds.sfr_lo, OutlierKind::sfr_low};
            if (value > thresholds.sfr_hi) return {thresholds.sfr_hi, OutlierKind::sfr_high};
            return {value, OutlierKind::none};
        case ClipVariable::magnitude:
            // Only a brightness floor: dim galaxies stay unflagged.
            if (value < thresholds.magnitude_lo)
                return {thresholds.magnitude_lo, OutlierKind::bright};
            return {value, OutlierKind::none};
    }
    throw std::invalid_argument("clip_and_flag: unknown variable");
}

Population normalize_features(const std::vector<GalaxyRecord>& records,
                              const ClipThresholds& thresholds) {
    Population pop;
    pop.galaxies.reserve(records.size());

    for (const auto& r : records) {
        const Clipped mass = clip_and_flag(r.stellar_mass, ClipVariable::mass, thresholds);
        const Clipped sfr = clip_and_flag(r.sfr, ClipVariable::sfr, thresholds);
        const Clipped mag = clip_and_flag(r.abs_magnitude, ClipVariable::magnitude, thresholds);

        ProcessedGalaxy g;
        g.id = r.id;
        g.mass_n = mass.value;
        g.sfr12_n = transform_sfr(sfr.value);
        g.brightness_n = invert_magnitude(mag.value);
        g.ra_n = r.right_ascension;
        g.tl_n = lookback_time(r.age_gyr);

        // Flag precedence: mass > sfr > magnitude.
        if (mass.flag != OutlierKind::none)
            g.flag = mass.flag;
        else if (sfr.flag != OutlierKind::none)
            g.flag = sfr.flag;
        else
            g.flag = mag.flag;

        pop.galaxies.push_back(std::move(g));
    }

    normalize_feature(pop.galaxies, "mass", [](ProcessedGalaxy& g) -> double& { return g.mass_n; }, pop.warnings);
    normalize_feature(pop.galaxies, "sfr12", [](ProcessedGalaxy& g) -> double& { return g.sfr12_n; }, pop.warnings);
    normalize_feature(pop.galaxies, "brightness", [](ProcessedGalaxy& g) -> double& { return g.brightness_n; }, pop.warnings);
    normalize_feature(pop.galaxies, "ra", [](ProcessedGalaxy& g) -> double& { return g.ra_n; }, pop.warnings);
    normalize_feature(pop.galaxies, "tl", [](ProcessedGalaxy& g) -> double& { return g.tl_n; }, pop.warnings);
    return pop;
}

FeatureStats moving_average(const std::vector<ProcessedGalaxy>& galaxies,
                            double window_n, std::size_t grid_size) {
    if (galaxies.empty())
        throw EmptyInputError("moving_average needs at least one galaxy");
    if (!(window_n > 0.0) || window_n > 1.0)
        throw std::invalid_argument("moving_average: window must lie in (0, 1]");
    if (grid_size < 2)
        throw std::invalid_argument("moving_average: grid needs at least two points");

    FeatureStats stats;
    stats.grid.resize(grid_size);
    stats.avg_mass_n.assign(grid_size, 0.0);
    stats.avg_sfr12_n.assign(grid_size, 0.0);
    stats.avg_brightness_n.assign(grid_size, 0.0);
    std::vector<std::size_t> counts(grid_size, 0);

    const double half = window_n / 2.0;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double g = static_cast<double>(i) / static_cast<double>(grid_size - 1);
        stats.grid[i] = g;
        double sum_mass = 0.0, sum_sfr = 0.0, sum_bright = 0.0;
        std::size_t n = 0;
        for (const auto& gal : galaxies) {
            if (std::abs(gal.tl_n - g) <= half) {
                sum_mass += gal.mass_n;
                sum_sfr += gal.sfr12_n;
                sum_bright += gal.brightness_n;
                ++n;
            }
        }
        counts[i] = n;
        if (n > 0) {
            stats.avg_mass_n[i] = sum_mass / static_cast<double>(n);
            stats.avg_sfr12_n[i] = sum_sfr / static_cast<double>(n);
            stats.avg_brightness_n[i] = sum_bright / static_cast<double>(n);
        }
    }

    // Empty windows inherit the nearest populated one (ties go left).
    bool any = std::any_of(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
    if (!any) {
        // Window narrower than the grid spacing can strand every point;
        // fall back to global means.
        double sum_mass = 0.0, sum_sfr = 0.0, sum_bright = 0.0;
        for (const auto& gal : galaxies) {
            sum_mass += gal.mass_n;
            sum_sfr += gal.sfr12_n;
            sum_bright += gal.brightness_n;
        }
        const double n = static_cast<double>(galaxies.size());
        std::fill(stats.avg_mass_n.begin(), stats.avg_mass_n.end(), sum_mass / n);
        std::fill(stats.avg_sfr12_n.begin(), stats.avg_sfr12_n.end(), sum_sfr / n);
        std::fill(stats.avg_brightness_n.begin(), stats.avg_brightness_n.end(), sum_bright / n);
        return stats;
    }
    for (std::size_t i = 0; i < grid_size; ++i) {
        if (counts[i] > 0) continue;
        std::size_t best = grid_size;
        std::size_t best_dist = std::numeric_limits<std::size_t>::max();
        for (std::size_t j = 0; j < grid_size; ++j) {
            if (counts[j] == 0) continue;
            const std::size_t dist = i > j ? i - j : j - i;
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        stats.avg_mass_n[i] = stats.avg_mass_n[best];
        stats.avg_sfr12_n[i] = stats.avg_sfr12_n[best];
        stats.avg_brightness_n[i] = stats.avg_brightness_n[best];
    }
    return stats;
}

void export_summary(const std::vector<ProcessedGalaxy>& galaxies,
                    const FeatureStats& stats, const std::string& histogram_path,
                    const std::string& stats_path, int histogram_bins) {
    if (histogram_bins < 1)
        throw std::invalid_argument("export_summary: need at least one histogram bin");

    std::ofstream hist(histogram_path);
    if (!hist) throw std::runtime_error("cannot write histogram file: " + histogram_path);

    struct Variable {
        const char* name;
        double ProcessedGalaxy::* member;
        bool (*is_flagged)(OutlierKind);
    };
    const std::array<Variable, 5> variables{{
        {"mass", &ProcessedGalaxy::mass_n,
         [](OutlierKind k) { return k == OutlierKind::mass_low || k == OutlierKind::mass_high; }},
        {"sfr12", &ProcessedGalaxy::sfr12_n,
         [](OutlierKind k) { return k == OutlierKind::sfr_low || k == OutlierKind::sfr_high; }},
        {"brightness", &ProcessedGalaxy::brightness_n,
         [](OutlierKind k) { return k == OutlierKind::bright; }},
        {"ra", &ProcessedGalaxy::ra_n, [](OutlierKind) { return false; }},
        {"tl", &ProcessedGalaxy::tl_n, [](OutlierKind) { return false; }},
    }};

    hist << "variable,bin_lo,bin_hi,count,outlier_count\n";
    const double width = 1.0 / histogram_bins;
    for (const auto& var : variables) {
        for (int b = 0; b < histogram_bins; ++b) {
            const double lo = b * width;
            const double hi = (b + 1) * width;
            std::size_t count = 0, outliers = 0;
            for (const auto& g : galaxies) {
                const double v = g.*var.member;
                const bool in_bin = (v >= lo && v < hi) || (b == histogram_bins - 1 && v == 1.0);
                if (!in_bin) continue;
                ++count;
                if (var.is_flagged(g.flag)) ++outliers;
            }
            hist << var.name << ',' << format_double(lo) << ',' << format_double(hi)
                 << ',' << count << ',' << outliers << '\n';
        }
    }
    if (!hist) throw std::runtime_error("failed writing histogram file: " + histogram_path);

    std::ofstream curves(stats_path);
    if (!curves) throw std::runtime_error("cannot write stats file: " + stats_path);
    curves << "tl_n,avg_mass_n,avg_sfr12_n,avg_brightness_n\n";
    for (std::size_t i = 0; i < stats.grid.size(); ++i) {
        curves << format_double(stats.grid[i]) << ',' << format_double(stats.avg_mass_n[i])
               << ',' << format_double(stats.avg_sfr12_n[i]) << ','
               << format_double(stats.avg_brightness_n[i]) << '\n';
    }
    if (!curves) throw std::runtime_error("failed writing stats file: " + stats_path);
}

} // namespace zsonify
