#include "zsonify/catalog.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "zsonify/errors.hpp"

namespace zsonify {

namespace {

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// Locale-independent double parse; the whole cell must be consumed.
bool parse_double(std::string_view cell, double& out) {
    cell = trim(cell);
    if (cell.empty()) return false;
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

struct NumericColumn {
    const char* field;
    const std::string* header;
    double GalaxyRecord::* member;
};

std::array<NumericColumn, 7> numeric_columns(const CatalogSchema& schema) {
    return {{
        {"stellar_mass", &schema.stellar_mass, &GalaxyRecord::stellar_mass},
        {"sfr", &schema.sfr, &GalaxyRecord::sfr},
        {"redshift", &schema.redshift, &GalaxyRecord::redshift},
        {"age", &schema.age, &GalaxyRecord::age_gyr},
        {"abs_magnitude", &schema.abs_magnitude, &GalaxyRecord::abs_magnitude},
        {"right_ascension", &schema.right_ascension, &GalaxyRecord::right_ascension},
        {"declination", &schema.declination, &GalaxyRecord::declination},
    }};
}

// Field-level validity; violations reject the row rather than aborting the
// parse.
bool validate_record(const GalaxyRecord& r, std::string& column, std::string& message) {
    if (r.sfr < 0.0) {
        column = "sfr";
        message = "negative star formation rate";
        return false;
    }
    if (!(r.age_gyr > 0.0) || r.age_gyr > 13.8) {
        column = "age";
        message = "age outside (0, 13.8]";
        return false;
    }
    if (r.redshift < 0.0) {
        column = "redshift";
        message = "negative redshift";
        return false;
    }
    return true;
}

} // namespace

ParseResult parse_catalog(std::istream& source, const CatalogSchema& schema) {
    std::string header_line;
    if (!std::getline(source, header_line))
        throw EmptyInputError("catalog is empty: no header row");

    const auto headers = split(header_line, schema.delimiter);
    auto find_column = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < headers.size(); ++i)
            if (trim(headers[i]) == name) return i;
        throw SchemaError("missing required column: " + name);
    };

    const std::size_t id_col = find_column(schema.id);
    const auto columns = numeric_columns(schema);
    std::array<std::size_t, 7> column_index{};
    for (std::size_t i = 0; i < columns.size(); ++i)
        column_index[i] = find_column(*columns[i].header);

    std::size_t max_needed = id_col;
    for (auto idx : column_index) max_needed = std::max(max_needed, idx);

    ParseResult result;
    std::string line;
    std::size_t row = 0;
    while (std::getline(source, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split(line, schema.delimiter);

        GalaxyRecord rec;
        std::string bad_column, message;
        bool ok = true;
        if (cells.size() <= max_needed) {
            ok = false;
            message = "row has too few cells";
        } else {
            rec.id = std::string(trim(cells[id_col]));
            for (std::size_t i = 0; i < columns.size() && ok; ++i) {
                double value = 0.0;
                if (!parse_double(cells[column_index[i]], value) || !std::isfinite(value)) {
                    ok = false;
                    bad_column = columns[i].field;
                    message = "malformed numeric cell";
                } else {
                    rec.*columns[i].member = value;
                }
            }
            if (ok) ok = validate_record(rec, bad_column, message);
        }

        if (ok)
            result.records.push_back(std::move(rec));
        else
            result.rejected.push_back({row, bad_column, message});
        ++row;
    }
    return result;
}

ParseResult parse_catalog_file(const std::string& path, const CatalogSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open catalog file: " + path);
    return parse_catalog(in, schema);
}

std::string serialize_catalog(const std::vector<GalaxyRecord>& records,
                              const CatalogSchema& schema) {
    const char d = schema.delimiter;
    std::ostringstream out;
    out << schema.id << d << schema.stellar_mass << d << schema.sfr << d
        << schema.redshift << d << schema.age << d << schema.abs_magnitude << d
        << schema.right_ascension << d << schema.declination << '\n';
    const auto columns = numeric_columns(schema);
    for (const auto& r : records) {
        out << r.id;
        for (const auto& c : columns) out << d << format_double(r.*c.member);
        out << '\n';
    }
    return out.str();
}

std::vector<FieldSummary> catalog_digest(const std::vector<GalaxyRecord>& records) {
    if (records.empty()) throw EmptyInputError("catalog digest needs at least one record");

    CatalogSchema logical; // digest names the logical fields, not file headers
    const auto columns = numeric_columns(logical);
    std::vector<FieldSummary> digest;
    digest.reserve(columns.size());
    for (const auto& c : columns) {
        FieldSummary s;
        s.field = c.field;
        s.count = records.size();
        s.min = s.max = records.front().*c.member;
        double sum = 0.0;
        for (const auto& r : records) {
            const double v = r.*c.member;
            s.min = std::min(s.min, v);
            s.max = std::max(s.max, v);
            sum += v;
        }
        s.mean = sum / static_cast<double>(records.size());
        digest.push_back(std::move(s));
    }
    return digest;
}

void write_digest(const std::vector<FieldSummary>& digest, std::ostream& out,
                  char delimiter) {
    const char d = delimiter;
    out << "field" << d << "min" << d << "max" << d << "mean" << d << "count" << '\n';
    for (const auto& s : digest)
        out << s.field << d << format_double(s.min) << d << format_double(s.max) << d
            << format_double(s.mean) << d << s.count << '\n';
}

} // namespace zsonify
