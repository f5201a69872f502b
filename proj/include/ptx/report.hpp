#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/evaluation.hpp"
#include "ptx/ingest.hpp"
#include "ptx/method1.hpp"
#include "ptx/schedule.hpp"
#include "ptx/series.hpp"
#include "ptx/time.hpp"

namespace ptx {

/** 64-bit FNV-1a over raw bytes; stable fingerprint for output manifests. */
inline std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes)
{
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

/**
 * Collects named output files, writes each atomically, and remembers the
 * checksum of what was written so the run manifest can list them.
 */
class ReportSink {
public:
    explicit ReportSink(std::filesystem::path dir) : dir_(std::move(dir))
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory " + dir_.string());
    }

    const std::filesystem::path& dir() const { return dir_; }

    void write(const std::string& name, const std::string& content)
    {
        write_file_atomic(dir_ / name, content);
        checksums_[name] = fnv1a64_hex(content);
    }

    /** name -> fnv1a hex digest, ordered by name. */
    const std::map<std::string, std::string>& checksums() const { return checksums_; }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::string> checksums_;
};

namespace report {

inline std::string num(double v) { return detail::format_value(v); }

inline std::string csv_escape(const std::string& field)
{
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/** Hour-by-hour plan: which hours run, at what score, placed by which rule. */
inline std::string plan_csv(const SchedulePlan& plan)
{
    std::vector<char> selected(plan.horizon, 0);
    std::vector<const PlanHour*> chosen(plan.horizon, nullptr);
    for (const auto& h : plan.selected) {
        selected[h.hour] = 1;
        chosen[h.hour] = &h;
    }
    std::ostringstream out;
    out << "timestamp,hour_index,selected,score,rule\n";
    for (std::size_t i = 0; i < plan.horizon; ++i) {
        out << format_utc(plan.start + static_cast<std::int64_t>(i)) << ',' << i << ','
            << int(selected[i]) << ',';
        if (!is_missing(plan.scores[i])) out << num(plan.scores[i]);
        out << ',';
        if (chosen[i]) out << selection_rule_name(chosen[i]->rule);
        out << '\n';
    }
    return out.str();
}

/** Per-period accounting: quota, what the line admitted, and the corrections. */
inline std::string ledger_csv(const SchedulePlan& plan)
{
    std::ostringstream out;
    out << "period,begin_hour,end_hour,target,below_line,filled,capped,achieved\n";
    for (const auto& row : plan.ledger) {
        out << csv_escape(row.period_id) << ',' << row.begin << ',' << row.end << ','
            << row.target << ',' << row.below_line << ',' << row.filled << ',' << row.capped
            << ',' << row.achieved << '\n';
    }
    return out.str();
}

inline std::string improvement_csv(const std::vector<ImprovementRow>& rows)
{
    std::ostringstream out;
    out << "area,flh,strategy,parameter,best,compromised,tradeoff,improvement_pct\n";
    for (const auto& r : rows) {
        out << csv_escape(r.area) << ',' << r.flh << ',' << strategy_name(r.strategy) << ','
            << parameter_name(r.parameter) << ',' << num(r.best) << ',' << num(r.compromised)
            << ',' << num(r.tradeoff) << ',' << num(r.improvement) << '\n';
    }
    return out.str();
}

inline std::string flh_curve_csv(const std::vector<FlhCurvePoint>& rows)
{
    std::ostringstream out;
    out << "flh,strategy,case,parameter,mean_value,hours\n";
    for (const auto& r : rows) {
        out << r.flh << ',' << strategy_name(r.strategy) << ',' << case_kind_name(r.kind) << ','
            << parameter_name(r.parameter) << ',' << num(r.mean_value) << ',' << r.hours << '\n';
    }
    return out.str();
}

inline std::string angle_sweep_csv(const std::vector<std::pair<Strategy, AnglePoint>>& rows)
{
    std::ostringstream out;
    out << "strategy,theta_deg,mean_price,mean_intensity\n";
    for (const auto& [strategy, p] : rows) {
        out << strategy_name(strategy) << ',' << num(p.theta_deg) << ',' << num(p.mean_price)
            << ',' << num(p.mean_intensity) << '\n';
    }
    return out.str();
}

inline std::string ratio_csv(const RatioStudy& study)
{
    std::ostringstream out;
    out << "duration_hours,scheduled_mean,random_mean,ratio\n";
    for (const auto& r : study.rows) {
        out << r.duration << ',' << num(r.scheduled_mean) << ',' << num(r.random_mean) << ','
            << num(r.ratio) << '\n';
    }
    return out.str();
}

inline std::string area_study_csv(const CorrelationStudy& study)
{
    std::ostringstream out;
    out << "area,correlation,improvement_pct\n";
    for (const auto& r : study.rows)
        out << csv_escape(r.area) << ',' << num(r.correlation) << ',' << num(r.improvement_pct)
            << '\n';
    return out.str();
}

inline std::string alignment_csv(const AlignmentResult& result, HourStamp start)
{
    std::ostringstream out;
    out << "date,generation_sum,scheduled_hours\n";
    for (std::size_t d = 0; d < result.days; ++d) {
        out << format_date(start + static_cast<std::int64_t>(d * 24)) << ','
            << num(result.daily_generation[d]) << ',' << num(result.daily_scheduled[d]) << '\n';
    }
    return out.str();
}

/** Forecast next to actuals, one row per delivery hour. */
inline std::string forecast_csv(const HourlySeries& forecast, const HourlySeries& actual)
{
    std::ostringstream out;
    out << "timestamp,forecast,actual\n";
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        const HourStamp t = forecast.stamp_at(i);
        out << format_utc(t) << ',' << num(forecast.values[i]) << ',';
        if (t >= actual.start) {
            const auto j = static_cast<std::size_t>(t - actual.start);
            if (j < actual.size() && !is_missing(actual.values[j])) out << num(actual.values[j]);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace report
} // namespace ptx
