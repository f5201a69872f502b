#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/ingest.hpp"
#include "ptx/schedule.hpp"

namespace ptx {

/** One data area: where its hourly files live and how its market clock runs. */
struct AreaConfig {
    std::string code;
    std::string price_path;
    std::string intensity_path;
    std::string generation_path;  // optional
    int tz_offset_minutes = 0;
};

/**
 * Everything a pipeline run needs, read from a flat `key = value` file.
 * Dotted prefixes group related keys; the full grammar is listed in the
 * README. Unknown keys are errors so typos cannot silently disable options.
 */
struct RunConfig {
    // csv dialect shared by all input files
    std::string csv_timestamp_column = "timestamp";
    std::string csv_value_column = "value";
    char csv_field_separator = ',';
    char csv_decimal_separator = '.';

    // gap handling when loading raw series
    GapPolicy gap_policy = GapPolicy::linear_interpolate;
    int max_gap_hours = 3;

    // scheduling window: local calendar days in the market timezone
    std::string start_date;  // "YYYY-MM-DD", first delivery day
    int days = 0;
    int market_utc_offset_hours = 0;
    std::string primary_area;  // defaults to the first declared area

    // forecasting model
    std::size_t horizon = 36;
    std::size_t skip = 12;  // origin-to-delivery lead hours
    std::size_t training_window = 2160;
    int trend_p = 24, trend_d = 1, trend_q = 0;
    int random_p = 24, random_d = 1, random_q = 0;
    int seasonal_period = 24;
    std::uint64_t seed = 1;
    bool reuse_fit = false;

    // scheduling target
    int flh_year = 6000;
    Strategy strategy = Strategy::daily;
    double theta_deg = 45.0;
    std::string reference = "auto";
    bool raw_units = false;

    // evaluation grids
    std::vector<int> flh_grid{4000, 5000, 6000, 7000};
    std::vector<double> angle_grid{0, 15, 30, 45, 60, 75, 90};
    std::vector<int> durations{1,  2,  3,  4,  5,  6,  7,  8,  9,  10, 11, 12,
                               13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24};

    std::string out_dir = "out";

    std::vector<AreaConfig> areas;  // declaration order

    // raw key/value pairs in file order, echoed into run manifests
    std::vector<std::pair<std::string, std::string>> raw;

    const AreaConfig& area(const std::string& code) const
    {
        for (const auto& a : areas)
            if (a.code == code) return a;
        throw ConfigError("area '" + code + "' is not declared in the config");
    }

    const AreaConfig& main_area() const
    {
        if (areas.empty()) throw ConfigError("no areas declared in the config");
        return primary_area.empty() ? areas.front() : area(primary_area);
    }
};

namespace confdetail {

inline std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline long long to_int(const std::string& key, const std::string& value)
{
    long long out = 0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ConfigError(key + ": '" + value + "' is not an integer");
    return out;
}

inline double to_double(const std::string& key, const std::string& value)
{
    double out = 0.0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ConfigError(key + ": '" + value + "' is not a number");
    return out;
}

inline bool to_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "no" || value == "0") return false;
    throw ConfigError(key + ": '" + value + "' is not a boolean (true/false)");
}

inline char to_separator(const std::string& key, const std::string& value)
{
    if (value == "tab") return '\t';
    if (value.size() == 1) return value[0];
    throw ConfigError(key + ": separator must be a single character or 'tab'");
}

/** Comma-separated integers; "a-b" tokens expand to inclusive ranges. */
inline std::vector<int> to_int_list(const std::string& key, const std::string& value)
{
    std::vector<int> out;
    std::stringstream ss(value);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) throw ConfigError(key + ": empty list element");
        const auto dash = token.find('-', 1);  // keep a leading minus sign intact
        if (dash != std::string::npos) {
            const int lo = static_cast<int>(to_int(key, token.substr(0, dash)));
            const int hi = static_cast<int>(to_int(key, token.substr(dash + 1)));
            if (hi < lo) throw ConfigError(key + ": range '" + token + "' is inverted");
            for (int v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            out.push_back(static_cast<int>(to_int(key, token)));
        }
    }
    if (out.empty()) throw ConfigError(key + ": list is empty");
    return out;
}

inline std::vector<double> to_double_list(const std::string& key, const std::string& value)
{
    std::vector<double> out;
    std::stringstream ss(value);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) throw ConfigError(key + ": empty list element");
        out.push_back(to_double(key, token));
    }
    if (out.empty()) throw ConfigError(key + ": list is empty");
    return out;
}

inline AreaConfig& area_for(RunConfig& cfg, const std::string& code)
{
    for (auto& a : cfg.areas)
        if (a.code == code) return a;
    cfg.areas.push_back(AreaConfig{code, "", "", "", 0});
    return cfg.areas.back();
}

} // namespace confdetail

/**
 * Chooses the reference window for a strategy: "auto" takes the strategy's
 * natural window, "trailing:<n>" pins a moving n-day window, and the window
 * names select one explicitly.
 */
inline ReferenceConfig resolve_reference(const std::string& spec, Strategy strategy,
                                         bool raw_units)
{
    ReferenceConfig ref = ReferenceConfig::defaults_for(strategy);
    ref.raw_units = raw_units;
    if (spec == "auto") return ref;
    if (spec.rfind("trailing:", 0) == 0) {
        ref.window = ReferenceWindow::trailing_days;
        ref.trailing_days =
            static_cast<int>(confdetail::to_int("schedule.reference", spec.substr(9)));
        if (ref.trailing_days < 1)
            throw ConfigError("schedule.reference: trailing day count must be positive");
        return ref;
    }
    if (spec == "same_month_previous_year") {
        ref.window = ReferenceWindow::same_month_previous_year;
        return ref;
    }
    if (spec == "previous_year") {
        ref.window = ReferenceWindow::previous_year;
        return ref;
    }
    if (spec == "period_itself") {
        ref.window = ReferenceWindow::period_itself;
        return ref;
    }
    throw ConfigError("schedule.reference: unknown window '" + spec
                      + "' (auto, trailing:<n>, same_month_previous_year, previous_year, "
                        "period_itself)");
}

/** Parses config text; `source` names the origin in error messages. */
inline RunConfig parse_config_text(const std::string& text, const std::string& source)
{
    RunConfig cfg;
    std::vector<std::string> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = confdetail::trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno)
                              + ": expected 'key = value'");
        const std::string key = confdetail::trim(stripped.substr(0, eq));
        const std::string value = confdetail::trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        if (value.empty())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty value for '"
                              + key + "'");
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '"
                              + key + "'");
        seen.push_back(key);
        cfg.raw.emplace_back(key, value);

        using namespace confdetail;
        if (key == "csv.timestamp_column") cfg.csv_timestamp_column = value;
        else if (key == "csv.value_column") cfg.csv_value_column = value;
        else if (key == "csv.field_separator") cfg.csv_field_separator = to_separator(key, value);
        else if (key == "csv.decimal_separator") cfg.csv_decimal_separator = to_separator(key, value);
        else if (key == "ingest.gap_policy") cfg.gap_policy = parse_gap_policy(value);
        else if (key == "ingest.max_gap_hours") cfg.max_gap_hours = static_cast<int>(to_int(key, value));
        else if (key == "run.start") cfg.start_date = value;
        else if (key == "run.days") cfg.days = static_cast<int>(to_int(key, value));
        else if (key == "run.area") cfg.primary_area = value;
        else if (key == "market.utc_offset_hours") cfg.market_utc_offset_hours = static_cast<int>(to_int(key, value));
        else if (key == "forecast.horizon") cfg.horizon = static_cast<std::size_t>(to_int(key, value));
        else if (key == "forecast.skip") cfg.skip = static_cast<std::size_t>(to_int(key, value));
        else if (key == "forecast.training_window") cfg.training_window = static_cast<std::size_t>(to_int(key, value));
        else if (key == "forecast.trend_p") cfg.trend_p = static_cast<int>(to_int(key, value));
        else if (key == "forecast.trend_d") cfg.trend_d = static_cast<int>(to_int(key, value));
        else if (key == "forecast.trend_q") cfg.trend_q = static_cast<int>(to_int(key, value));
        else if (key == "forecast.random_p") cfg.random_p = static_cast<int>(to_int(key, value));
        else if (key == "forecast.random_d") cfg.random_d = static_cast<int>(to_int(key, value));
        else if (key == "forecast.random_q") cfg.random_q = static_cast<int>(to_int(key, value));
        else if (key == "forecast.seasonal_period") cfg.seasonal_period = static_cast<int>(to_int(key, value));
        else if (key == "forecast.seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
        else if (key == "forecast.reuse_fit") cfg.reuse_fit = to_bool(key, value);
        else if (key == "schedule.flh_year") cfg.flh_year = static_cast<int>(to_int(key, value));
        else if (key == "schedule.strategy") cfg.strategy = parse_strategy(value);
        else if (key == "schedule.theta_deg") cfg.theta_deg = to_double(key, value);
        else if (key == "schedule.reference") cfg.reference = value;
        else if (key == "schedule.raw_units") cfg.raw_units = to_bool(key, value);
        else if (key == "evaluate.flh_grid") cfg.flh_grid = to_int_list(key, value);
        else if (key == "evaluate.angle_grid") cfg.angle_grid = to_double_list(key, value);
        else if (key == "evaluate.durations") cfg.durations = to_int_list(key, value);
        else if (key == "out.dir") cfg.out_dir = value;
        else if (key.rfind("area.", 0) == 0) {
            const auto rest = key.substr(5);
            const auto dot = rest.find('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 >= rest.size())
                throw ConfigError(source + ":" + std::to_string(lineno)
                                  + ": area keys look like area.<code>.<field>");
            const std::string code = rest.substr(0, dot);
            const std::string field = rest.substr(dot + 1);
            AreaConfig& area = area_for(cfg, code);
            if (field == "price") area.price_path = value;
            else if (field == "intensity") area.intensity_path = value;
            else if (field == "generation") area.generation_path = value;
            else if (field == "tz_offset_minutes")
                area.tz_offset_minutes = static_cast<int>(to_int(key, value));
            else
                throw ConfigError(source + ":" + std::to_string(lineno) + ": unknown area field '"
                                  + field + "'");
        } else {
            throw ConfigError(source + ":" + std::to_string(lineno) + ": unknown key '" + key
                              + "'");
        }
    }

    if (cfg.theta_deg < 0.0 || cfg.theta_deg > 90.0)
        throw ConfigError("schedule.theta_deg must lie in [0, 90]");
    for (int d : cfg.durations)
        if (d < 1 || d > 24)
            throw ConfigError("evaluate.durations entries must lie in 1..24");
    for (double a : cfg.angle_grid)
        if (a < 0.0 || a > 90.0)
            throw ConfigError("evaluate.angle_grid entries must lie in [0, 90]");
    if (cfg.max_gap_hours < 1) throw ConfigError("ingest.max_gap_hours must be positive");
    for (const auto& a : cfg.areas) {
        if (a.price_path.empty() && a.intensity_path.empty() && a.generation_path.empty())
            throw ConfigError("area." + a.code + " declares no data files");
    }
    if (!cfg.primary_area.empty()) cfg.area(cfg.primary_area);  // must exist
    return cfg;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

} // namespace ptx
