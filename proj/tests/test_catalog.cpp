#include <doctest.h>

#include <sstream>

#include "support/fixtures.hpp"
#include "zsonify/catalog.hpp"
#include "zsonify/errors.hpp"

using namespace zsonify;

namespace {

ParseResult parse_text(const std::string& text, const CatalogSchema& schema = {}) {
    std::istringstream in(text);
    return parse_catalog(in, schema);
}

} // namespace

TEST_CASE("parse_catalog reads a single valid row") {
    const auto result = parse_text(
        "id,stellar_mass,sfr,redshift,age,abs_magnitude,ra,dec\n"
        "gal-1,10.5,2.5,0.4,9.1,-22.3,150.1,2.2\n");
    REQUIRE(result.records.size() == 1);
    CHECK(result.rejected.empty());
    const auto& r = result.records[0];
    CHECK(r.id == "gal-1");
    CHECK(r.stellar_mass == 10.5);
    CHECK(r.sfr == 2.5);
    CHECK(r.redshift == 0.4);
    CHECK(r.age_gyr == 9.1);
    CHECK(r.abs_magnitude == -22.3);
    CHECK(r.right_ascension == 150.1);
    CHECK(r.declination == 2.2);
}

TEST_CASE("parse_catalog rejects malformed numeric cells with row diagnostics") {
    const auto result = parse_text(
        "id,stellar_mass,sfr,redshift,age,abs_magnitude,ra,dec\n"
        "g1,10.5,2.5,0.4,9.1,-22.3,150.1,2.2\n"
        "g2,10.5,abc,0.4,9.1,-22.3,150.1,2.2\n"
        "g3,10.7,1.0,0.5,8.0,-21.9,149.9,2.0\n");
    CHECK(result.records.size() == 2);
    REQUIRE(result.rejected.size() == 1);
    CHECK(result.rejected[0].row == 1);
    CHECK(result.rejected[0].column == "sfr");
}

TEST_CASE("parse_catalog rejects rows violating field invariants") {
    const auto result = parse_text(
        "id,stellar_mass,sfr,redshift,age,abs_magnitude,ra,dec\n"
        "neg-sfr,10.5,-1.0,0.4,9.1,-22.3,150.1,2.2\n"
        "old,10.5,1.0,0.4,14.5,-22.3,150.1,2.2\n"
        "zero-age,10.5,1.0,0.4,0.0,-22.3,150.1,2.2\n"
        "inf-mass,inf,1.0,0.4,9.1,-22.3,150.1,2.2\n"
        "ok,10.5,1.0,0.4,9.1,-22.3,150.1,2.2\n");
    CHECK(result.records.size() == 1);
    CHECK(result.records[0].id == "ok");
    REQUIRE(result.rejected.size() == 4);
    CHECK(result.rejected[0].column == "sfr");
    CHECK(result.rejected[1].column == "age");
    CHECK(result.rejected[2].column == "age");
    CHECK(result.rejected[3].column == "stellar_mass");
}

TEST_CASE("parse_catalog errors") {
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_catalog(empty), EmptyInputError);

    std::istringstream missing("id,stellar_mass,sfr,redshift,age,ra,dec\n");
    CHECK_THROWS_WITH_AS(parse_catalog(missing),
                         "missing required column: abs_magnitude", SchemaError);
}

TEST_CASE("parse_catalog maps custom headers and ignores extra columns") {
    CatalogSchema schema;
    schema.delimiter = ';';
    schema.stellar_mass = "LOGMSTAR";
    schema.age = "AGE_UNIV";
    const auto result = parse_text(
        "junk;id;LOGMSTAR;sfr;redshift;AGE_UNIV;abs_magnitude;ra;dec;more\n"
        "x;g1;10.0;1.0;0.5;9.0;-22.0;150.0;2.0;y\n",
        schema);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].stellar_mass == 10.0);
    CHECK(result.records[0].age_gyr == 9.0);
}

TEST_CASE("parse totality and order over the crafted fixture") {
    const auto result = parse_text(testsupport::kCraftedCatalog);
    CHECK(result.records.size() + result.rejected.size() == 12);
    CHECK(result.records.size() == 12); // every crafted row parses
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        CHECK(result.records[i].id ==
              std::string("g") + (i < 9 ? "0" : "") + std::to_string(i + 1));
    }
}

TEST_CASE("serialize then reparse yields identical records") {
    const auto first = parse_text(testsupport::kCraftedCatalog);
    const std::string text = serialize_catalog(first.records);
    const auto second = parse_text(text);
    REQUIRE(second.records.size() == first.records.size());
    for (std::size_t i = 0; i < first.records.size(); ++i) {
        const auto& a = first.records[i];
        const auto& b = second.records[i];
        CHECK(a.id == b.id);
        CHECK(a.stellar_mass == b.stellar_mass);
        CHECK(a.sfr == b.sfr);
        CHECK(a.redshift == b.redshift);
        CHECK(a.age_gyr == b.age_gyr);
        CHECK(a.abs_magnitude == b.abs_magnitude);
        CHECK(a.right_ascension == b.right_ascension);
        CHECK(a.declination == b.declination);
    }
}

TEST_CASE("round-trip preserves awkward doubles exactly") {
    std::vector<GalaxyRecord> records(1);
    records[0].id = "g";
    records[0].stellar_mass = 10.123456789012345;
    records[0].sfr = 1e-17;
    records[0].redshift = 0.1 + 0.2;
    records[0].age_gyr = 13.799999999999999;
    records[0].abs_magnitude = -21.000000000000004;
    records[0].right_ascension = 149.99999999999997;
    records[0].declination = 2.0000000000000004;
    const auto reparsed = parse_text(serialize_catalog(records));
    REQUIRE(reparsed.records.size() == 1);
    const auto& b = reparsed.records[0];
    CHECK(b.stellar_mass == records[0].stellar_mass);
    CHECK(b.sfr == records[0].sfr);
    CHECK(b.redshift == records[0].redshift);
    CHECK(b.age_gyr == records[0].age_gyr);
    CHECK(b.abs_magnitude == records[0].abs_magnitude);
    CHECK(b.right_ascension == records[0].right_ascension);
    CHECK(b.declination == records[0].declination);
}

TEST_CASE("catalog_digest basics") {
    const auto result = parse_text(
        "id,stellar_mass,sfr,redshift,age,abs_magnitude,ra,dec\n"
        "a,8.0,1.0,0.4,9.0,-22.0,150.0,2.0\n"
        "b,10.0,1.0,0.4,9.0,-22.0,150.0,2.0\n");
    const auto digest = catalog_digest(result.records);
    REQUIRE(digest.size() == 7);
    CHECK(digest[0].field == "stellar_mass");
    CHECK(digest[0].min == 8.0);
    CHECK(digest[0].max == 10.0);
    CHECK(digest[0].mean == 9.0);
    CHECK(digest[0].count == 2);

    const auto one = catalog_digest({result.records[0]});
    for (const auto& f : one) {
        CHECK(f.min == f.max);
        CHECK(f.min == f.mean);
        CHECK(f.count == 1);
    }

    CHECK_THROWS_AS(catalog_digest({}), EmptyInputError);
}

TEST_CASE("catalog_digest matches the independently computed table") {
    // First ten crafted rows; expectations from the external oracle.
    std::string text(testsupport::kCraftedCatalog);
    std::size_t pos = 0;
    for (int lines = 0; lines < 11; ++lines) pos = text.find('\n', pos) + 1;
    const auto result = parse_text(text.substr(0, pos));
    REQUIRE(result.records.size() == 10);

    const auto digest = catalog_digest(result.records);
    struct Row {
        const char* field;
        double min, max, mean;
    };
    const Row expected[] = {
        {"stellar_mass", 6.0, 12.3, 9.873},
        {"sfr", 0.05, 150.0, 25.615},
        {"redshift", 0.2, 3.0, 0.725},
        {"age", 5.9, 13.8, 8.190000000000001},
        {"abs_magnitude", -26.0, -21.0, -22.799},
        {"right_ascension", 149.5, 150.6, 150.01},
        {"declination", 1.75, 2.3, 2.0249999999999995},
    };
    REQUIRE(digest.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(digest[i].field == expected[i].field);
        CHECK(digest[i].min == doctest::Approx(expected[i].min).epsilon(1e-12));
        CHECK(digest[i].max == doctest::Approx(expected[i].max).epsilon(1e-12));
        CHECK(digest[i].mean == doctest::Approx(expected[i].mean).epsilon(1e-12));
        CHECK(digest[i].count == 10);
    }
}

TEST_CASE("write_digest emits the documented columns") {
    const auto result = parse_text(
        "id,stellar_mass,sfr,redshift,age,abs_magnitude,ra,dec\n"
        "a,8.0,1.0,0.4,9.0,-22.0,150.0,2.0\n");
    std::ostringstream out;
    write_digest(catalog_digest(result.records), out);
    const std::string text = out.str();
    CHECK(text.rfind("field,min,max,mean,count\n", 0) == 0);
    CHECK(text.find("stellar_mass,8,8,8,1\n") != std::string::npos);
}
