#pragma once

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/series.hpp"
#include "ptx/time.hpp"

namespace ptx {

/**
 * How to deal with hours that are missing after the file has been laid out
 * on the hourly grid.
 */
enum class GapPolicy {
    reject,             // any gap is an error
    forward_fill,       // copy the last seen value forward
    linear_interpolate, // straight line between the bracketing values
};

inline const char* gap_policy_name(GapPolicy p)
{
    switch (p) {
    case GapPolicy::reject: return "reject";
    case GapPolicy::forward_fill: return "forward_fill";
    case GapPolicy::linear_interpolate: return "linear_interpolate";
    }
    return "?";
}

inline GapPolicy parse_gap_policy(std::string_view s)
{
    if (s == "reject") return GapPolicy::reject;
    if (s == "forward_fill") return GapPolicy::forward_fill;
    if (s == "linear_interpolate") return GapPolicy::linear_interpolate;
    throw ConfigError("unknown gap policy '" + std::string(s) + "'");
}

/**
 * Shape of one input file. Column names refer to the header row; the zone
 * offset applies to timestamps without their own zone suffix. Sources that
 * use a decimal comma must use a non-comma field separator.
 */
struct CsvSpec {
    std::string path;
    std::string timestamp_column = "timestamp";
    std::string value_column = "value";
    std::string area;
    Quantity quantity = Quantity::price;
    std::string unit; // empty means the conventional unit for the quantity
    int tz_offset_minutes = 0;
    char field_separator = ',';
    char decimal_separator = '.';
};

struct IngestReport {
    std::string path;
    std::string area;
    Quantity quantity = Quantity::price;
    std::size_t rows_read = 0;
    std::size_t rows_dropped = 0; // duplicated-hour rows discarded (keep-first)
    std::size_t gaps_found = 0;   // missing hours on the grid after layout
    std::size_t gaps_filled = 0;
    HourStamp first{};
    HourStamp last{};
    std::string gap_policy = "reject";
};

namespace csv {

/**
 * Splits one logical CSV record that has already been isolated (quotes
 * balanced). Quoted fields may contain separators and doubled quotes.
 */
inline std::vector<std::string> split_record(std::string_view line, char sep)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == sep) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

/**
 * Reads logical records, honoring newlines inside quoted fields and both LF
 * and CRLF endings. Returns false at end of input.
 */
inline bool read_record(std::istream& in, std::string& out)
{
    out.clear();
    bool quoted = false;
    bool any = false;
    char c;
    while (in.get(c)) {
        any = true;
        if (c == '"') quoted = !quoted;
        if (c == '\n' && !quoted) break;
        out.push_back(c);
    }
    if (!out.empty() && out.back() == '\r') out.pop_back();
    return any;
}

inline double parse_value(std::string_view field, char decimal_separator, std::size_t row)
{
    std::string buf(field);
    if (decimal_separator != '.') {
        for (char& ch : buf)
            if (ch == decimal_separator) ch = '.';
    }
    const char* begin = buf.data();
    const char* end = begin + buf.size();
    double v = 0.0;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end)
        throw ParseError("row " + std::to_string(row) + ": bad numeric value '" + buf + "'");
    return v;
}

} // namespace csv

/**
 * Loads one hourly series from a CSV file onto a gap-free UTC grid.
 *
 * The file must have a header row naming the configured columns. Rows are
 * sorted by timestamp; an hour occurring exactly twice is treated as a
 * zone-fold duplicate (the first row wins and the drop is reported), three
 * or more occurrences are corrupt input. Hours absent between the first and
 * last timestamp become missing markers and are counted as gaps; filling
 * them is repair_series' job.
 */
inline HourlySeries load_hourly_csv(const CsvSpec& spec, IngestReport* report = nullptr)
{
    std::ifstream in(spec.path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + spec.path + "'");

    std::string record;
    if (!csv::read_record(in, record))
        throw ParseError(spec.path + ": empty file");

    const auto header = csv::split_record(record, spec.field_separator);
    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw ParseError(spec.path + ": no column named '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ts_col = column(spec.timestamp_column);
    const std::size_t val_col = column(spec.value_column);

    std::vector<std::pair<HourStamp, double>> rows;
    std::size_t row_no = 1;
    while (csv::read_record(in, record)) {
        ++row_no;
        if (record.empty()) continue;
        const auto fields = csv::split_record(record, spec.field_separator);
        if (fields.size() <= std::max(ts_col, val_col))
            throw ParseError(spec.path + ": row " + std::to_string(row_no) + " has "
                             + std::to_string(fields.size()) + " fields, expected at least "
                             + std::to_string(std::max(ts_col, val_col) + 1));
        HourStamp t;
        try {
            t = parse_timestamp(fields[ts_col], spec.tz_offset_minutes);
        } catch (const CadenceError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(spec.path + ": row " + std::to_string(row_no) + ": " + e.what());
        }
        const std::string_view raw = fields[val_col];
        const double v = raw.empty() ? kMissing : csv::parse_value(raw, spec.decimal_separator, row_no);
        rows.emplace_back(t, v);
    }
    if (rows.empty()) throw EmptyInputError(spec.path + ": no data rows");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    HourlySeries out;
    out.area = spec.area;
    out.quantity = spec.quantity;
    out.unit = spec.unit.empty() ? default_unit(spec.quantity) : spec.unit;
    out.start = rows.front().first;

    IngestReport rep;
    rep.path = spec.path;
    rep.area = spec.area;
    rep.quantity = spec.quantity;
    rep.rows_read = rows.size();
    rep.first = rows.front().first;
    rep.last = rows.back().first;

    const auto span = static_cast<std::size_t>(rows.back().first - rows.front().first) + 1;
    out.values.assign(span, kMissing);
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        while (j + 1 < rows.size() && rows[j + 1].first == rows[i].first) ++j;
        const std::size_t copies = j - i + 1;
        if (copies > 2)
            throw ParseError(spec.path + ": timestamp " + format_utc(rows[i].first) + " occurs "
                             + std::to_string(copies) + " times");
        if (copies == 2) ++rep.rows_dropped;
        out.values[static_cast<std::size_t>(rows[i].first - out.start)] = rows[i].second;
        i = j + 1;
    }

    rep.gaps_found = out.missing_count();
    if (report) *report = rep;
    return out;
}

/**
 * Replaces missing markers according to the policy. max_gap_hours bounds the
 * length of a single run a policy may fill; longer runs (and edge runs that
 * linear interpolation cannot bracket) are errors. On success the result has
 * no missing markers.
 */
inline HourlySeries repair_series(const HourlySeries& series, GapPolicy policy,
                                  std::size_t max_gap_hours = 3, std::size_t* filled = nullptr)
{
    HourlySeries out = series;
    if (filled) *filled = 0;
    std::size_t i = 0;
    const std::size_t n = out.values.size();
    while (i < n) {
        if (!is_missing(out.values[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && is_missing(out.values[j])) ++j;
        const std::size_t run = j - i;
        const std::string where =
            format_utc(out.stamp_at(i)) + " (" + std::to_string(run) + "h)";
        if (policy == GapPolicy::reject)
            throw GapError(out.area + "/" + quantity_name(out.quantity) + ": gap at " + where);
        if (run > max_gap_hours)
            throw GapError(out.area + "/" + quantity_name(out.quantity) + ": gap at " + where
                           + " exceeds max_gap_hours=" + std::to_string(max_gap_hours));
        if (policy == GapPolicy::forward_fill) {
            if (i == 0)
                throw GapError(out.area + ": gap at series start cannot be forward-filled");
            for (std::size_t k = i; k < j; ++k) out.values[k] = out.values[i - 1];
        } else {
            if (i == 0 || j == n)
                throw GapError(out.area + ": gap at " + where
                               + " touches the series edge, cannot interpolate");
            const double a = out.values[i - 1];
            const double b = out.values[j];
            for (std::size_t k = i; k < j; ++k) {
                const double frac =
                    static_cast<double>(k - i + 1) / static_cast<double>(run + 1);
                out.values[k] = a + (b - a) * frac;
            }
        }
        if (filled) *filled += run;
        i = j;
    }
    return out;
}

namespace detail {

/** Shortest decimal form that round-trips the exact double. */
inline std::string format_value(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace detail

/**
 * Writes a series in the canonical two-column schema this library also
 * ingests: header "timestamp,value", ISO-8601 UTC stamps, shortest
 * round-trip numbers, empty value field for missing hours.
 */
inline void write_series_csv(std::ostream& out, const HourlySeries& series)
{
    out << "timestamp,value\n";
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        out << format_utc(series.stamp_at(i)) << ',';
        if (!is_missing(series.values[i])) out << detail::format_value(series.values[i]);
        out << '\n';
    }
}

/** Atomic file write: the target appears complete or not at all. */
inline void write_file_atomic(const std::filesystem::path& target, const std::string& content)
{
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

inline void write_series_csv(const std::filesystem::path& target, const HourlySeries& series)
{
    std::ostringstream buf;
    write_series_csv(buf, series);
    write_file_atomic(target, buf.str());
}

/** CsvSpec matching write_series_csv output, for reading our own files back. */
inline CsvSpec canonical_spec(const std::string& path, const std::string& area, Quantity q)
{
    CsvSpec spec;
    spec.path = path;
    spec.area = area;
    spec.quantity = q;
    return spec;
}

} // namespace ptx
