#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace zsonify {

/// One raw catalog row. Numeric fields are validated at parse time:
/// everything finite, sfr >= 0, redshift >= 0, age in (0, 13.8].
struct GalaxyRecord {
    std::string id;
    double stellar_mass = 0.0;    // log10 of total stellar mass, solar units
    double sfr = 0.0;             // star formation rate, solar masses / year
    double redshift = 0.0;        // parsed, unused downstream
    double age_gyr = 0.0;         // age of the Universe at the galaxy, Gyr
    double abs_magnitude = 0.0;   // M_V, lower = brighter
    double right_ascension = 0.0; // degrees
    double declination = 0.0;     // degrees, parsed but never bound
};

/// Maps logical field names to column headers in the input file.
/// Extra columns in the file are ignored.
struct CatalogSchema {
    char delimiter = ',';
    std::string id = "id";
    std::string stellar_mass = "stellar_mass";
    std::string sfr = "sfr";
    std::string redshift = "redshift";
    std::string age = "age";
    std::string abs_magnitude = "abs_magnitude";
    std::string right_ascension = "ra";
    std::string declination = "dec";
};

struct RowError {
    std::size_t row = 0; // 0-based data-row index (header excluded)
    std::string column;
    std::string message;
};

struct ParseResult {
    std::vector<GalaxyRecord> records; // in file order
    std::vector<RowError> rejected;    // rows that failed to parse or validate
};

ParseResult parse_catalog(std::istream& source, const CatalogSchema& schema = {});
ParseResult parse_catalog_file(const std::string& path, const CatalogSchema& schema = {});

/// Serializes records back to delimited text using the schema's column names.
/// Numbers are written with enough digits to round-trip exactly.
std::string serialize_catalog(const std::vector<GalaxyRecord>& records,
                              const CatalogSchema& schema = {});

struct FieldSummary {
    std::string field;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    std::size_t count = 0;
};

/// Per-field extrema and means over the numeric columns.
std::vector<FieldSummary> catalog_digest(const std::vector<GalaxyRecord>& records);

/// Writes a digest as delimited text, columns: field,min,max,mean,count.
void write_digest(const std::vector<FieldSummary>& digest, std::ostream& out,
                  char delimiter = ',');

} // namespace zsonify
