#pragma once

// Shared fixtures: a 12-row crafted catalog with hand-verified expected
// values, and a deterministic synthetic catalog generator.

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "zsonify/preprocess.hpp"

namespace testsupport {

// Boundary rows: g01 sits exactly on every lower clip threshold plus the
// age and magnitude cut boundaries, g02 on the upper clip thresholds, g07
// on the quality magnitude boundary, g08 at the age of the Universe.
// g09/g12 fail the quality cut, g10/g11 the bias cut.
inline const char* kCraftedCatalog =
    "id,stellar_mass,sfr,redshift,age,abs_magnitude,ra,dec\n"
    "g01,9.25,0.10,0.30,6.0,-21.00,149.50,1.85\n"
    "g02,11.58,76.0,0.50,7.2,-24.19,150.20,2.10\n"
    "g03,9.00,5.0,0.40,8.0,-22.00,149.80,1.95\n"
    "g04,12.30,2.0,0.60,9.5,-23.00,150.00,2.00\n"
    "g05,10.00,0.05,0.20,10.0,-21.50,149.60,2.30\n"
    "g06,10.50,150.0,0.70,6.5,-23.50,150.40,1.75\n"
    "g07,10.80,20.0,0.90,7.0,-26.00,150.60,2.20\n"
    "g08,9.80,1.0,0.35,13.8,-21.80,149.90,2.05\n"
    "g09,6.00,1.0,0.30,8.0,-22.00,150.00,1.90\n"
    "g10,9.50,1.0,3.00,5.9,-23.00,150.10,2.15\n"
    "g11,9.60,2.0,0.25,11.0,-20.50,149.70,1.80\n"
    "g12,9.90,3.0,0.45,12.0,-27.00,150.30,2.25\n";

struct ExpectedGalaxy {
    const char* id;
    double mass_n;
    double sfr12_n;
    double brightness_n;
    double ra_n;
    double tl_n;
    zsonify::OutlierKind flag;
};

// End-to-end expectation for the 8 surviving rows, computed independently
// with an arbitrary-precision oracle over the same double inputs.
inline const std::array<ExpectedGalaxy, 8> kCraftedExpected = {{
    {"g01", 0.0, 0.0, 0.0, 0.0, 1.0, zsonify::OutlierKind::none},
    {"g02", 1.0, 1.0, 1.0, 0.6363636363636294, 0.8461538461538461,
     zsonify::OutlierKind::none},
    {"g03", 0.0, 0.5221955979544125, 0.31347962382445127, 0.2727272727272845,
     0.7435897435897436, zsonify::OutlierKind::mass_low},
    {"g04", 1.0, 0.3842020650531947, 0.6269592476489025, 0.4545454545454569,
     0.5512820512820513, zsonify::OutlierKind::mass_high},
    {"g05", 0.3218884120171674, 0.0, 0.15673981191222564, 0.09090909090908621,
     0.4871794871794872, zsonify::OutlierKind::sfr_low},
    {"g06", 0.5364806866952789, 1.0, 0.7836990595611282, 0.8181818181818276,
     0.9358974358974359, zsonify::OutlierKind::sfr_high},
    {"g07", 0.6652360515021462, 0.7520662553605174, 1.0, 1.0, 0.8717948717948718,
     zsonify::OutlierKind::bright},
    {"g08", 0.23605150214592305, 0.286594827046352, 0.25078369905956127,
     0.3636363636363707, 0.0, zsonify::OutlierKind::none},
}};

// splitmix64, enough for fixture generation and independent of the
// library's noise generator.
class FixtureRng {
public:
    explicit FixtureRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

private:
    std::uint64_t state_;
};

// A plausible catalog: most rows inside the clip thresholds, a few outliers
// of each kind, everything passing the quality and bias cuts.
inline std::string synthetic_catalog(std::size_t rows, std::uint64_t seed) {
    FixtureRng rng(seed);
    std::ostringstream out;
    out << "id,stellar_mass,sfr,redshift,age,abs_magnitude,ra,dec\n";
    out.precision(17);
    for (std::size_t i = 0; i < rows; ++i) {
        const double mass = rng.uniform(9.3, 11.5);
        const double sfr = std::exp(rng.uniform(-2.0, 4.2)); // 0.14 .. 66
        const double z = rng.uniform(0.1, 1.0);
        const double age = rng.uniform(6.2, 13.7);
        const double mv = rng.uniform(-24.1, -21.2);
        const double ra = rng.uniform(149.4, 150.8);
        const double dec = rng.uniform(1.6, 2.4);
        out << "s" << i << ',' << mass << ',' << sfr << ',' << z << ',' << age << ','
            << mv << ',' << ra << ',' << dec << '\n';
    }
    return out.str();
}

inline std::vector<zsonify::ProcessedGalaxy> processed_from_crafted() {
    std::vector<zsonify::ProcessedGalaxy> galaxies;
    for (const auto& e : kCraftedExpected) {
        zsonify::ProcessedGalaxy g;
        g.id = e.id;
        g.mass_n = e.mass_n;
        g.sfr12_n = e.sfr12_n;
        g.brightness_n = e.brightness_n;
        g.ra_n = e.ra_n;
        g.tl_n = e.tl_n;
        g.flag = e.flag;
        galaxies.push_back(std::move(g));
    }
    return galaxies;
}

} // namespace testsupport
