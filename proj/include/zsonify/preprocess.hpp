#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "zsonify/catalog.hpp"

namespace zsonify {

enum class OutlierKind {
    none,
    mass_low,
    mass_high,
    sfr_low,
    sfr_high,
    bright,
};

const char* outlier_kind_name(OutlierKind kind);

/// Galaxy after filtering, clipping and min-max normalization.
/// All *_n fields lie in [0, 1].
struct ProcessedGalaxy {
    std::string id;
    double mass_n = 0.0;       // clipped stellar mass
    double sfr12_n = 0.0;      // clipped SFR^(1/12)
    double brightness_n = 0.0; // clipped -M_V
    double ra_n = 0.0;         // right ascension
    double tl_n = 0.0;         // lookback time
    OutlierKind flag = OutlierKind::none;
};

/// Moving-average curves of the three principal features, sampled on a
/// strictly increasing grid over normalized lookback time.
struct FeatureStats {
    std::vector<double> grid;
    std::vector<double> avg_mass_n;
    std::vector<double> avg_sfr12_n;
    std::vector<double> avg_brightness_n;
};

/// Removes rows that look like measurement errors:
/// abs_magnitude < magnitude_floor or stellar_mass <= mass_floor.
struct QualityCuts {
    double magnitude_floor = -26.0;
    double mass_floor = 6.0;
};

/// Removes rows affected by the survey's flux limit:
/// age < age_min_gyr or abs_magnitude > magnitude_ceiling.
struct BiasCuts {
    double age_min_gyr = 6.0;
    double magnitude_ceiling = -21.0;
};

/// Clip thresholds on the raw variable scales. SFR thresholds apply to the
/// raw rate, before the twelfth root. Dim galaxies have no upper magnitude
/// threshold and are never flagged.
struct ClipThresholds {
    double mass_lo = 9.25;
    double mass_hi = 11.58;
    double sfr_lo = 0.1;
    double sfr_hi = 76.0;
    double magnitude_lo = -24.19;
};

std::vector<GalaxyRecord> quality_filter(const std::vector<GalaxyRecord>& records,
                                         const QualityCuts& cuts = {});

std::vector<GalaxyRecord> bias_filter(const std::vector<GalaxyRecord>& records,
                                      const BiasCuts& cuts = {});

/// SFR^(1/12). Monotonic; 0 maps to 0. Negative input throws.
double transform_sfr(double sfr);

/// 13.8 - age. Ages beyond 13.8 Gyr throw.
double lookback_time(double age_gyr);

/// -m, so that higher values mean brighter objects.
double invert_magnitude(double m);

enum class ClipVariable { mass, sfr, magnitude };

struct Clipped {
    double value = 0.0;
    OutlierKind flag = OutlierKind::none;
};

/// Replaces out-of-range values by the nearest threshold and flags them.
/// Values exactly at a threshold are in range and stay unflagged.
Clipped clip_and_flag(double value, ClipVariable variable,
                      const ClipThresholds& thresholds = {});

/// Min-max scales values into [0, 1] in place; scaling an already scaled
/// span is the identity. Returns false when min == max, in which case every
/// value becomes 0.5.
bool min_max_scale(std::span<double> values);

struct Population {
    std::vector<ProcessedGalaxy> galaxies;
    std::vector<std::string> warnings;
};

/// Clips, transforms and min-max normalizes the surviving records.
/// A feature with min == max maps every galaxy to 0.5 and emits a warning.
/// If several thresholds are crossed the flag precedence is
/// mass > sfr > magnitude.
Population normalize_features(const std::vector<GalaxyRecord>& records,
                              const ClipThresholds& thresholds = {});

/// Windowed means of the three principal features along tl_n.
/// window_n is the full window width on the normalized axis; grid points
/// whose window holds no galaxy inherit the nearest non-empty value.
FeatureStats moving_average(const std::vector<ProcessedGalaxy>& galaxies,
                            double window_n = 0.05, std::size_t grid_size = 256);

/// Writes per-variable histogram counts (with flagged galaxies in a separate
/// column) and the moving-average curves as delimited text.
/// Histogram columns: variable,bin_lo,bin_hi,count,outlier_count.
/// Stats columns: tl_n,avg_mass_n,avg_sfr12_n,avg_brightness_n.
void export_summary(const std::vector<ProcessedGalaxy>& galaxies,
                    const FeatureStats& stats, const std::string& histogram_path,
                    const std::string& stats_path, int histogram_bins = 40);

} // namespace zsonify
