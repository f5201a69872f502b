#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/schedule.hpp"
#include "ptx/series.hpp"
#include "ptx/stats.hpp"
#include "ptx/tradeoff.hpp"

namespace ptx {

enum class CaseKind { best, compromised, tradeoff };

inline const char* case_kind_name(CaseKind c)
{
    switch (c) {
        case CaseKind::best: return "best";
        case CaseKind::compromised: return "compromised";
        case CaseKind::tradeoff: return "tradeoff";
    }
    return "?";
}

enum class Parameter { price, intensity };

inline const char* parameter_name(Parameter p)
{
    return p == Parameter::price ? "price" : "intensity";
}

/** Per-hour means of both parameters over one selection. */
struct SelectionMeans {
    double price = 0.0;
    double intensity = 0.0;
    std::size_t n = 0;
};

inline SelectionMeans means_over(std::span<const HourPoint> points,
                                 std::span<const std::size_t> positions)
{
    if (positions.empty()) throw EmptyInputError("means_over: empty selection");
    SelectionMeans m;
    for (std::size_t pos : positions) {
        m.price += points[pos].price;
        m.intensity += points[pos].intensity;
    }
    m.n = positions.size();
    m.price /= double(m.n);
    m.intensity /= double(m.n);
    return m;
}

/** Means over a plan's selected hours, looked up in an hour-indexed series. */
inline SelectionMeans means_over_hours(const PairedSeries& actual,
                                       std::span<const std::size_t> hours)
{
    std::vector<double> price(actual.span, kMissing), co2(actual.span, kMissing);
    for (const auto& p : actual.points) {
        price[p.index] = p.price;
        co2[p.index] = p.intensity;
    }
    SelectionMeans m;
    for (std::size_t h : hours) {
        if (h >= actual.span || is_missing(price[h])) continue;
        m.price += price[h];
        m.intensity += co2[h];
        ++m.n;
    }
    if (m.n == 0) throw EmptyInputError("means_over_hours: no scheduled hour has data");
    m.price /= double(m.n);
    m.intensity /= double(m.n);
    return m;
}

/**
 * The three scheduling cases over one candidate pool with a fixed budget k.
 * Best-case targets one parameter at its pure angle; the other parameter's
 * mean over that same selection is the compromised case; the trade-off case
 * selects at theta and reports both.
 */
struct CaseMeans {
    double best_price = 0.0;
    double best_intensity = 0.0;
    double compromised_price = 0.0;      // price paid when optimizing intensity
    double compromised_intensity = 0.0;  // intensity suffered when optimizing price
    double tradeoff_price = 0.0;
    double tradeoff_intensity = 0.0;
    std::size_t k = 0;
};

inline CaseMeans case_means(std::span<const HourPoint> points, std::size_t k, double theta_deg,
                            const NormalizationFrame& frame)
{
    CaseMeans out;
    out.k = k;
    const auto by_price = means_over(points, select_k_lowest(points, 90.0, k, frame));
    out.best_price = by_price.price;
    out.compromised_intensity = by_price.intensity;
    const auto by_co2 = means_over(points, select_k_lowest(points, 0.0, k, frame));
    out.best_intensity = by_co2.intensity;
    out.compromised_price = by_co2.price;
    const auto by_theta = means_over(points, select_k_lowest(points, theta_deg, k, frame));
    out.tradeoff_price = by_theta.price;
    out.tradeoff_intensity = by_theta.intensity;
    return out;
}

/**
 * Relative saving of the trade-off schedule against the compromised case, in
 * percent. Negative when the trade-off does worse, which happens on strongly
 * price/intensity-correlated areas.
 */
inline double improvement_pct(double, double compromised, double tradeoff)
{
    if (compromised == 0.0)
        throw DegenerateError("improvement_pct: compromised mean is zero");
    return 100.0 * (compromised - tradeoff) / compromised;
}

struct ImprovementRow {
    std::string area;
    int flh = 0;
    Strategy strategy = Strategy::yearly;
    Parameter parameter = Parameter::intensity;
    double best = 0.0;
    double compromised = 0.0;
    double tradeoff = 0.0;
    double improvement = 0.0;  // percent
};

inline ImprovementRow make_improvement_row(const std::string& area, int flh, Strategy strategy,
                                           Parameter parameter, const CaseMeans& m)
{
    ImprovementRow r;
    r.area = area;
    r.flh = flh;
    r.strategy = strategy;
    r.parameter = parameter;
    if (parameter == Parameter::price) {
        r.best = m.best_price;
        r.compromised = m.compromised_price;
        r.tradeoff = m.tradeoff_price;
    } else {
        r.best = m.best_intensity;
        r.compromised = m.compromised_intensity;
        r.tradeoff = m.tradeoff_intensity;
    }
    r.improvement = improvement_pct(r.best, r.compromised, r.tradeoff);
    return r;
}

namespace detail {

inline double case_angle(CaseKind kind, Parameter parameter, double theta_deg)
{
    switch (kind) {
        case CaseKind::best:
            return parameter == Parameter::price ? 90.0 : 0.0;
        case CaseKind::compromised:
            // the other parameter got its optimum; this one rides along
            return parameter == Parameter::price ? 0.0 : 90.0;
        case CaseKind::tradeoff:
            return theta_deg;
    }
    return theta_deg;
}

inline std::vector<HourPoint> period_points(const PairedSeries& points, const PeriodSpan& p)
{
    std::vector<HourPoint> out;
    for (const auto& pt : points.points)
        if (pt.index >= p.begin && pt.index < p.end) out.push_back(pt);
    return out;
}

/** Pooled per-hour means over every period's exact-quota selection. */
inline SelectionMeans pooled_period_means(const PairedSeries& points, Strategy strategy,
                                          int flh, double angle_deg, int label_offset)
{
    const auto periods = period_plan(strategy, flh, points.start, points.span, label_offset);
    double sum_price = 0.0, sum_co2 = 0.0;
    std::size_t n = 0;
    for (const auto& period : periods) {
        if (period.quota == 0) continue;
        const auto pts = period_points(points, period);
        if (period.quota > pts.size())
            throw CapacityError("period " + period.id + " has " + std::to_string(pts.size())
                                + " usable hours, quota " + std::to_string(period.quota));
        const bool pure = angle_deg == 0.0 || angle_deg == 90.0;
        const NormalizationFrame frame =
            pure ? NormalizationFrame::identity() : frame_from_points(pts);
        for (std::size_t pos : select_k_lowest(pts, angle_deg, period.quota, frame)) {
            sum_price += pts[pos].price;
            sum_co2 += pts[pos].intensity;
            ++n;
        }
    }
    if (n == 0) throw EmptyInputError("no hours selected over the horizon");
    return {sum_price / double(n), sum_co2 / double(n), n};
}

} // namespace detail

struct FlhCurvePoint {
    int flh = 0;
    Strategy strategy = Strategy::yearly;
    CaseKind kind = CaseKind::best;
    Parameter parameter = Parameter::price;
    double mean_value = 0.0;
    std::size_t hours = 0;  // selected hours pooled into the mean
};

/**
 * Characterizes the data in hindsight: for each budget on the grid, periods
 * select exactly their quota of lowest-scoring hours and the chosen case's
 * parameter is averaged over the union of all selected hours.
 */
inline std::vector<FlhCurvePoint> flh_curve(const PairedSeries& points, Strategy strategy,
                                            CaseKind kind, Parameter parameter,
                                            std::span<const int> flh_grid, double theta_deg,
                                            int label_offset = 0)
{
    std::vector<FlhCurvePoint> curve;
    for (int flh : flh_grid) {
        const double angle = detail::case_angle(kind, parameter, theta_deg);
        const auto m =
            detail::pooled_period_means(points, strategy, flh, angle, label_offset);
        FlhCurvePoint cp;
        cp.flh = flh;
        cp.strategy = strategy;
        cp.kind = kind;
        cp.parameter = parameter;
        cp.mean_value = parameter == Parameter::price ? m.price : m.intensity;
        cp.hours = m.n;
        curve.push_back(cp);
    }
    return curve;
}

struct AnglePoint {
    double theta_deg = 0.0;
    double mean_price = 0.0;
    double mean_intensity = 0.0;
};

/** Trade-off case means across a grid of line angles at one budget. */
inline std::vector<AnglePoint> angle_sweep(const PairedSeries& points, int flh,
                                           Strategy strategy, std::span<const double> angles,
                                           int label_offset = 0)
{
    std::vector<AnglePoint> out;
    for (double theta : angles) {
        const auto m =
            detail::pooled_period_means(points, strategy, flh, theta, label_offset);
        out.push_back({theta, m.price, m.intensity});
    }
    return out;
}

/**
 * Mid-sweep comparison across strategies: how much cheaper and cleaner the
 * coarser quotas get at the same angle, relative to daily scheduling.
 */
struct MidpointDeltas {
    double theta_deg = 45.0;
    double daily_price = 0.0, monthly_price = 0.0, yearly_price = 0.0;
    double daily_intensity = 0.0, monthly_intensity = 0.0, yearly_intensity = 0.0;
    double monthly_price_drop_pct = 0.0, yearly_price_drop_pct = 0.0;
    double monthly_intensity_drop_pct = 0.0, yearly_intensity_drop_pct = 0.0;
};

inline MidpointDeltas strategy_midpoint_deltas(const PairedSeries& points, int flh,
                                               double theta_deg = 45.0, int label_offset = 0)
{
    MidpointDeltas d;
    d.theta_deg = theta_deg;
    const auto daily =
        detail::pooled_period_means(points, Strategy::daily, flh, theta_deg, label_offset);
    const auto monthly =
        detail::pooled_period_means(points, Strategy::monthly, flh, theta_deg, label_offset);
    const auto yearly =
        detail::pooled_period_means(points, Strategy::yearly, flh, theta_deg, label_offset);
    d.daily_price = daily.price;
    d.monthly_price = monthly.price;
    d.yearly_price = yearly.price;
    d.daily_intensity = daily.intensity;
    d.monthly_intensity = monthly.intensity;
    d.yearly_intensity = yearly.intensity;
    if (daily.price == 0.0 || daily.intensity == 0.0)
        throw DegenerateError("daily means are zero; relative drops undefined");
    d.monthly_price_drop_pct = 100.0 * (daily.price - monthly.price) / daily.price;
    d.yearly_price_drop_pct = 100.0 * (daily.price - yearly.price) / daily.price;
    d.monthly_intensity_drop_pct =
        100.0 * (daily.intensity - monthly.intensity) / daily.intensity;
    d.yearly_intensity_drop_pct =
        100.0 * (daily.intensity - yearly.intensity) / daily.intensity;
    return d;
}

struct RatioRow {
    int duration = 0;  // consumption hours per day, 1..24
    double scheduled_mean = 0.0;
    double random_mean = 0.0;
    double ratio = 0.0;
};

struct RatioStudy {
    Parameter parameter = Parameter::price;
    double theta_deg = 90.0;
    std::vector<RatioRow> rows;
    std::size_t days_used = 0;
    std::size_t days_dropped = 0;  // days without a complete 24-hour candidate set
};

/**
 * Savings from placing d consumption hours by score instead of uniformly at
 * random. The random baseline per day is the full 24-hour mean, which is the
 * exact expectation of any uniformly random d-hour draw, so no sampling is
 * involved. Incomplete days are dropped from both sides.
 */
inline RatioStudy random_baseline_ratio(const PairedSeries& points, Parameter tracked,
                                        double theta_deg, std::span<const int> durations)
{
    for (int d : durations)
        if (d < 1 || d > 24)
            throw ConfigError("duration " + std::to_string(d) + " outside 1..24");

    const std::size_t day_count = (points.span + 23) / 24;
    std::vector<std::vector<HourPoint>> days(day_count);
    for (const auto& p : points.points) days[p.index / 24].push_back(p);

    std::vector<const std::vector<HourPoint>*> complete;
    std::size_t dropped = 0;
    for (const auto& day : days) {
        if (day.size() == 24)
            complete.push_back(&day);
        else
            ++dropped;
    }
    if (complete.empty()) throw EmptyInputError("no complete 24-hour day in the data");

    RatioStudy study;
    study.parameter = tracked;
    study.theta_deg = theta_deg;
    study.days_used = complete.size();
    study.days_dropped = dropped;

    const bool pure = theta_deg == 0.0 || theta_deg == 90.0;
    auto value_of = [&](const HourPoint& p) {
        return tracked == Parameter::price ? p.price : p.intensity;
    };

    for (int d : durations) {
        double scheduled_sum = 0.0, random_sum = 0.0;
        for (const auto* day : complete) {
            const NormalizationFrame frame =
                pure ? NormalizationFrame::identity() : frame_from_points(*day);
            double sel_sum = 0.0;
            for (std::size_t pos :
                 select_k_lowest(*day, theta_deg, static_cast<std::size_t>(d), frame))
                sel_sum += value_of((*day)[pos]);
            scheduled_sum += sel_sum / double(d);
            double day_sum = 0.0;
            for (const auto& p : *day) day_sum += value_of(p);
            random_sum += day_sum / 24.0;
        }
        RatioRow row;
        row.duration = d;
        row.scheduled_mean = scheduled_sum / double(complete.size());
        row.random_mean = random_sum / double(complete.size());
        if (row.random_mean == 0.0)
            throw DegenerateError("random baseline mean is zero; ratio undefined");
        row.ratio = row.scheduled_mean / row.random_mean;
        study.rows.push_back(row);
    }
    return study;
}

struct AreaStudyRow {
    std::string area;
    double correlation = 0.0;      // Pearson(price, intensity) over the year
    double improvement_pct = 0.0;  // yearly intensity improvement at the study budget
};

struct CorrelationStudy {
    std::vector<AreaStudyRow> rows;
    stats::OlsFit fit;  // improvement regressed on correlation
    std::vector<std::string> skipped;
    int flh = 6000;
    double theta_deg = 45.0;
};

/** The regression step on already-computed area rows. */
inline stats::OlsFit study_fit(std::span<const AreaStudyRow> rows)
{
    std::vector<double> x, y;
    for (const auto& r : rows) {
        x.push_back(r.correlation);
        y.push_back(r.improvement_pct);
    }
    return stats::ols_fit(x, y);
}

/**
 * Does the price/intensity correlation of an area predict how much a
 * trade-off schedule can save? One row per area, then an OLS fit of
 * intensity improvement on correlation. Areas whose data cannot carry the
 * computation (constant series, not enough hours) are skipped and listed.
 */
inline CorrelationStudy correlation_improvement_study(
    std::span<const std::pair<std::string, PairedSeries>> areas, int flh = 6000,
    double theta_deg = 45.0, int label_offset = 0)
{
    CorrelationStudy study;
    study.flh = flh;
    study.theta_deg = theta_deg;
    for (const auto& [name, points] : areas) {
        try {
            std::vector<double> price, co2;
            price.reserve(points.points.size());
            for (const auto& p : points.points) {
                price.push_back(p.price);
                co2.push_back(p.intensity);
            }
            const double corr = stats::pearson_correlation(price, co2);
            const auto periods =
                period_plan(Strategy::yearly, flh, points.start, points.span, label_offset);
            const auto frame = frame_from_points(points.points);
            const auto m =
                case_means(points.points, periods.at(0).quota, theta_deg, frame);
            const double impr =
                improvement_pct(m.best_intensity, m.compromised_intensity,
                                m.tradeoff_intensity);
            study.rows.push_back({name, corr, impr});
        } catch (const Error&) {
            study.skipped.push_back(name);
        }
    }
    if (study.rows.size() < 3)
        throw LengthError("correlation study needs at least 3 usable areas, got "
                          + std::to_string(study.rows.size()));
    study.fit = study_fit(study.rows);
    return study;
}

struct AlignmentResult {
    std::vector<double> daily_generation;  // MWh summed per delivery day
    std::vector<double> daily_scheduled;   // scheduled hours per delivery day
    double correlation = 0.0;
    std::size_t days = 0;
};

/**
 * Do the plan's busy days track the renewable supply? Sums generation per
 * delivery day and correlates it with the number of scheduled hours. Plans
 * whose daily counts never vary (the point of the daily strategy) cannot be
 * scored this way and are rejected.
 */
inline AlignmentResult generation_alignment(const HourlySeries& generation,
                                            const SchedulePlan& plan)
{
    if (plan.horizon == 0 || plan.horizon % 24 != 0)
        throw ConfigError("plan horizon must be a positive multiple of 24 hours");
    if (generation.quantity != Quantity::generation)
        throw UnitError("generation_alignment expects a generation series, got "
                        + std::string(quantity_name(generation.quantity)));
    const std::int64_t offset = plan.start - generation.start;
    if (offset < 0
        || static_cast<std::size_t>(offset) + plan.horizon > generation.size())
        throw RangeError("generation series does not cover the plan horizon");

    AlignmentResult out;
    out.days = plan.horizon / 24;
    out.daily_generation.assign(out.days, 0.0);
    out.daily_scheduled.assign(out.days, 0.0);
    for (std::size_t h = 0; h < plan.horizon; ++h) {
        const double v = generation.values[static_cast<std::size_t>(offset) + h];
        if (is_missing(v))
            throw RangeError("generation value missing at "
                             + format_utc(plan.start + static_cast<std::int64_t>(h)));
        out.daily_generation[h / 24] += v;
    }
    for (const auto& s : plan.selected) out.daily_scheduled[s.hour / 24] += 1.0;

    const double first = out.daily_scheduled.empty() ? 0.0 : out.daily_scheduled[0];
    bool varies = false;
    for (double c : out.daily_scheduled)
        if (c != first) {
            varies = true;
            break;
        }
    if (!varies)
        throw DegenerateError("scheduled-hour counts are identical every day; "
                              "alignment is not applicable for daily strategy plans");

    out.correlation = stats::pearson_correlation(out.daily_generation, out.daily_scheduled);
    return out;
}

} // namespace ptx
