#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/normalize.hpp"
#include "ptx/series.hpp"
#include "ptx/time.hpp"
#include "ptx/tradeoff.hpp"

namespace ptx {

enum class Strategy { daily, monthly, yearly };

inline const char* strategy_name(Strategy s)
{
    switch (s) {
        case Strategy::daily: return "daily";
        case Strategy::monthly: return "monthly";
        case Strategy::yearly: return "yearly";
    }
    return "?";
}

inline Strategy parse_strategy(const std::string& s)
{
    if (s == "daily") return Strategy::daily;
    if (s == "monthly") return Strategy::monthly;
    if (s == "yearly") return Strategy::yearly;
    throw ConfigError("unknown strategy '" + s + "' (expected daily, monthly or yearly)");
}

/** What the scheduler is asked to deliver. */
struct ScheduleTarget {
    int flh_year = 6000;      // full load hours per year the plan must reach
    Strategy strategy = Strategy::daily;
    double theta_deg = 45.0;  // trade-off angle, 90 = price only, 0 = intensity only
};

/** Where the calibration line gets its reference scores from. */
enum class ReferenceWindow {
    trailing_days,             // the N days immediately before each delivery day
    same_month_previous_year,  // calendar month one year back
    previous_year,             // the full year immediately before the horizon
    period_itself,             // the scheduling period's own hours (hindsight mode)
};

inline const char* reference_window_name(ReferenceWindow w)
{
    switch (w) {
        case ReferenceWindow::trailing_days: return "trailing_days";
        case ReferenceWindow::same_month_previous_year: return "same_month_previous_year";
        case ReferenceWindow::previous_year: return "previous_year";
        case ReferenceWindow::period_itself: return "period_itself";
    }
    return "?";
}

struct ReferenceConfig {
    ReferenceWindow window = ReferenceWindow::trailing_days;
    int trailing_days = 7;   // only read for ReferenceWindow::trailing_days
    bool raw_units = false;  // score raw EUR/MWh and gCO2eq/kWh instead of normalized

    static ReferenceConfig defaults_for(Strategy s)
    {
        ReferenceConfig r;
        switch (s) {
            case Strategy::daily: r.window = ReferenceWindow::trailing_days; break;
            case Strategy::monthly: r.window = ReferenceWindow::same_month_previous_year; break;
            case Strategy::yearly: r.window = ReferenceWindow::previous_year; break;
        }
        return r;
    }
};

/** One scheduling period: a day, a calendar month, or the whole horizon. */
struct PeriodSpan {
    std::string id;          // "2018-06-05", "2018-06" or "2018"
    std::size_t begin = 0;   // hour offset into the horizon, inclusive
    std::size_t end = 0;     // exclusive
    std::size_t quota = 0;   // hours this period must contribute
};

namespace detail {

inline void validate_horizon(std::size_t horizon)
{
    if (horizon == 0 || horizon % 24 != 0)
        throw ConfigError("scheduling horizon must be a positive multiple of 24 hours, got "
                          + std::to_string(horizon));
}

inline void validate_flh(int flh_year)
{
    if (flh_year < 1 || flh_year > 8784)
        throw CapacityError("flh_year " + std::to_string(flh_year)
                            + " outside 1..8784 attainable hours");
}

/**
 * Caps each period's share at its own hour count and hands the overflow to
 * periods that still have room, one hour at a time in chronological order.
 * Keeps totals intact whenever the horizon can absorb them at all.
 */
inline void clamp_and_redistribute(std::vector<PeriodSpan>& periods,
                                   std::vector<std::size_t>& shares)
{
    std::size_t overflow = 0;
    for (std::size_t i = 0; i < periods.size(); ++i) {
        const std::size_t cap = periods[i].end - periods[i].begin;
        if (shares[i] > cap) {
            overflow += shares[i] - cap;
            shares[i] = cap;
        }
    }
    while (overflow > 0) {
        bool placed = false;
        for (std::size_t i = 0; i < periods.size() && overflow > 0; ++i) {
            const std::size_t cap = periods[i].end - periods[i].begin;
            if (shares[i] < cap) {
                ++shares[i];
                --overflow;
                placed = true;
            }
        }
        if (!placed) break;  // every period is full; the rest cannot be scheduled
    }
    for (std::size_t i = 0; i < periods.size(); ++i) periods[i].quota = shares[i];
}

} // namespace detail

/**
 * Splits a horizon into scheduling periods and assigns each its share of the
 * yearly full-load-hour budget.
 *
 * Daily shares split the budget evenly over the calendar year, the remainder
 * going one extra hour to each of the first (flh mod days) days of the year.
 * Monthly shares do the same over the twelve months. A period only partly
 * covered by the horizon gets its share scaled by coverage. Shares that
 * exceed a period's own length spill over to later periods with room.
 *
 * `day_label_offset_hours` shifts the UTC hour grid before reading calendar
 * labels, so a market trading in local time gets local day boundaries.
 */
inline std::vector<PeriodSpan> period_plan(Strategy strategy, int flh_year, HourStamp start,
                                           std::size_t horizon,
                                           int day_label_offset_hours = 0)
{
    detail::validate_horizon(horizon);
    detail::validate_flh(flh_year);

    const std::size_t days = horizon / 24;
    auto label_of = [&](std::size_t day) -> HourStamp {
        return start + static_cast<std::int64_t>(day * 24) + day_label_offset_hours;
    };

    std::vector<PeriodSpan> periods;
    std::vector<std::size_t> shares;

    if (strategy == Strategy::daily) {
        for (std::size_t d = 0; d < days; ++d) {
            const HourStamp lab = label_of(d);
            const int diy = timeutil::days_in_year(civil_date_of(lab).year);
            const int base = flh_year / diy;
            const int rem = flh_year % diy;
            const std::size_t share =
                static_cast<std::size_t>(base) + (day_of_year(lab) < rem ? 1u : 0u);
            periods.push_back({format_date(lab), d * 24, (d + 1) * 24, 0});
            shares.push_back(share);
        }
    } else if (strategy == Strategy::monthly) {
        std::size_t d = 0;
        while (d < days) {
            const HourStamp lab = label_of(d);
            const CivilDate first = civil_date_of(lab);
            std::size_t span_days = 1;
            while (d + span_days < days) {
                const CivilDate next = civil_date_of(label_of(d + span_days));
                if (next.year != first.year || next.month != first.month) break;
                ++span_days;
            }
            const int full_quota = flh_year / 12 + ((first.month - 1) < flh_year % 12 ? 1 : 0);
            const std::size_t covered = span_days * 24;
            const std::size_t full =
                static_cast<std::size_t>(timeutil::days_in_month(first.year, first.month)) * 24;
            const std::size_t share =
                covered == full
                    ? static_cast<std::size_t>(full_quota)
                    : static_cast<std::size_t>(std::llround(
                          double(full_quota) * double(covered) / double(full)));
            periods.push_back({format_month(lab), d * 24, (d + span_days) * 24, 0});
            shares.push_back(share);
            d += span_days;
        }
    } else {
        const CivilDate first = civil_date_of(label_of(0));
        const std::size_t full =
            static_cast<std::size_t>(timeutil::days_in_year(first.year)) * 24;
        const std::size_t share = horizon >= full
                                      ? static_cast<std::size_t>(flh_year)
                                      : static_cast<std::size_t>(std::llround(
                                            double(flh_year) * double(horizon) / double(full)));
        periods.push_back({std::to_string(first.year), 0, horizon, 0});
        shares.push_back(share);
    }

    detail::clamp_and_redistribute(periods, shares);
    return periods;
}

/** How an hour earned its place in the plan. */
enum class SelectionRule {
    below_line,           // cleared the calibrated line on its delivery day
    nearest_to_line,      // daily deficit fill, best remaining score first
    end_of_period_block,  // monthly or yearly deficit fill at the period's end
};

inline const char* selection_rule_name(SelectionRule r)
{
    switch (r) {
        case SelectionRule::below_line: return "below_line";
        case SelectionRule::nearest_to_line: return "nearest_to_line";
        case SelectionRule::end_of_period_block: return "end_of_period_block";
    }
    return "?";
}

struct PlanHour {
    std::size_t hour = 0;  // offset into the horizon
    double score = 0.0;    // trade-off score under that day's line
    SelectionRule rule = SelectionRule::below_line;
};

struct LedgerRow {
    std::string period_id;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t target = 0;      // quota assigned by period_plan
    std::size_t below_line = 0;  // hours accepted because they cleared the line
    std::size_t filled = 0;      // hours added to cover a deficit
    std::size_t capped = 0;      // hours below the line but beyond the quota
    std::size_t achieved = 0;    // below_line + filled
};

struct SchedulePlan {
    Strategy strategy = Strategy::daily;
    double theta_deg = 45.0;
    int flh_year = 0;
    HourStamp start{};
    std::size_t horizon = 0;
    std::vector<PlanHour> selected;  // ascending by hour
    std::vector<LedgerRow> ledger;
    std::vector<double> scores;  // per horizon hour; missing data scores as NaN
};

inline std::vector<std::size_t> selected_hours(const SchedulePlan& plan)
{
    std::vector<std::size_t> out;
    out.reserve(plan.selected.size());
    for (const auto& s : plan.selected) out.push_back(s.hour);
    return out;
}

namespace detail {

struct StampedPoint {
    HourStamp stamp;
    HourPoint point;
};

/**
 * History strictly before the candidate window, then the candidates
 * themselves: everything the scheduler is allowed to look at, stamped.
 */
inline std::vector<StampedPoint> build_timeline(const PairedSeries& history,
                                                const PairedSeries& candidates)
{
    std::vector<StampedPoint> tl;
    tl.reserve(history.points.size() + candidates.points.size());
    for (const auto& p : history.points) {
        const HourStamp st = history.start + static_cast<std::int64_t>(p.index);
        if (st < candidates.start) tl.push_back({st, p});
    }
    for (const auto& p : candidates.points)
        tl.push_back({candidates.start + static_cast<std::int64_t>(p.index), p});
    return tl;
}

inline std::vector<HourPoint> slice_timeline(const std::vector<StampedPoint>& tl, HourStamp lo,
                                             HourStamp hi)
{
    auto cmp = [](const StampedPoint& a, HourStamp s) { return a.stamp < s; };
    auto it = std::lower_bound(tl.begin(), tl.end(), lo, cmp);
    std::vector<HourPoint> out;
    for (; it != tl.end() && it->stamp < hi; ++it) out.push_back(it->point);
    return out;
}

/** Hour span of a reference window, used to scale the quota into k_ref. */
struct ReferenceSlice {
    std::vector<HourPoint> points;
    std::size_t window_hours = 0;
};

inline ReferenceSlice reference_slice(const ReferenceConfig& ref, const PeriodSpan& period,
                                      std::size_t day_begin, const PairedSeries& candidates,
                                      const std::vector<StampedPoint>& timeline,
                                      int label_offset)
{
    ReferenceSlice out;
    switch (ref.window) {
        case ReferenceWindow::trailing_days: {
            if (ref.trailing_days < 1)
                throw ConfigError("reference.trailing_days must be at least 1");
            const HourStamp hi = candidates.start + static_cast<std::int64_t>(day_begin);
            const HourStamp lo = hi - static_cast<std::int64_t>(ref.trailing_days) * 24;
            out.points = slice_timeline(timeline, lo, hi);
            out.window_hours = static_cast<std::size_t>(ref.trailing_days) * 24;
            break;
        }
        case ReferenceWindow::same_month_previous_year: {
            const CivilDate first =
                civil_date_of(candidates.start + static_cast<std::int64_t>(period.begin)
                              + label_offset);
            const int y = first.year - 1;
            const HourStamp lo = make_hour(y, first.month, 1, 0) - label_offset;
            const HourStamp hi = first.month == 12 ? make_hour(y + 1, 1, 1, 0) - label_offset
                                                   : make_hour(y, first.month + 1, 1, 0)
                                                         - label_offset;
            out.points = slice_timeline(timeline, lo, hi);
            out.window_hours = static_cast<std::size_t>(hi - lo);
            break;
        }
        case ReferenceWindow::previous_year: {
            const HourStamp hi = candidates.start;
            const CivilDate first = civil_date_of(hi + label_offset);
            int y = first.year - 1;
            int m = first.month;
            int d = std::min(first.day, timeutil::days_in_month(y, m));
            const HourStamp lo = make_hour(y, m, d, hour_of_day(hi + label_offset))
                                 - label_offset;
            out.points = slice_timeline(timeline, lo, hi);
            out.window_hours = static_cast<std::size_t>(hi - lo);
            break;
        }
        case ReferenceWindow::period_itself: {
            const HourStamp lo = candidates.start + static_cast<std::int64_t>(period.begin);
            const HourStamp hi = candidates.start + static_cast<std::int64_t>(period.end);
            out.points = slice_timeline(timeline, lo, hi);
            out.window_hours = period.end - period.begin;
            break;
        }
    }
    if (out.points.empty())
        throw RangeError("reference window for period " + period.id
                         + " contains no usable hours");
    return out;
}

inline std::size_t scaled_k_ref(const PeriodSpan& period, const ReferenceSlice& ref)
{
    const std::size_t period_hours = period.end - period.begin;
    std::size_t k = static_cast<std::size_t>(std::llround(
        double(period.quota) * double(ref.window_hours) / double(period_hours)));
    if (k < 1) k = 1;
    if (k > ref.points.size()) k = ref.points.size();
    return k;
}

} // namespace detail

/**
 * Builds a delivery plan over `candidates` (price/intensity pairs for the
 * horizon, normally day-ahead forecasts). `history` supplies reference
 * windows that reach before the horizon; it may be empty when the reference
 * is the period itself.
 *
 * Every delivery day gets a line calibrated on its period's reference
 * window; hours at or below the line are taken in time order until the
 * period quota is met. Days settle any remainder immediately: a deficit is
 * filled with the unselected hours closest to the line, a surplus drops the
 * highest scores. Months and years run their quota chronologically and
 * backfill a deficit from the period's final hours, walking backwards.
 */
inline SchedulePlan schedule(const ScheduleTarget& target, const PairedSeries& history,
                             const PairedSeries& candidates, const ReferenceConfig& ref,
                             int day_label_offset_hours = 0)
{
    if (target.theta_deg < 0.0 || target.theta_deg > 90.0)
        throw ConfigError("theta " + std::to_string(target.theta_deg) + " outside [0, 90]");
    if (candidates.points.empty())
        throw EmptyInputError("no candidate hours to schedule");

    auto periods = period_plan(target.strategy, target.flh_year, candidates.start,
                               candidates.span, day_label_offset_hours);
    const auto timeline = detail::build_timeline(history, candidates);

    SchedulePlan plan;
    plan.strategy = target.strategy;
    plan.theta_deg = target.theta_deg;
    plan.flh_year = target.flh_year;
    plan.start = candidates.start;
    plan.horizon = candidates.span;
    plan.scores.assign(candidates.span, kMissing);

    // candidate positions grouped by delivery day
    const std::size_t days = candidates.span / 24;
    std::vector<std::vector<std::size_t>> day_positions(days);
    for (std::size_t pos = 0; pos < candidates.points.size(); ++pos)
        day_positions[candidates.points[pos].index / 24].push_back(pos);

    std::vector<char> taken(candidates.span, 0);
    std::map<std::size_t, PlanHour> chosen;  // hour -> entry, keeps output sorted

    for (std::size_t pi = 0; pi < periods.size(); ++pi) {
        const PeriodSpan& period = periods[pi];
        LedgerRow row;
        row.period_id = period.id;
        row.begin = period.begin;
        row.end = period.end;
        row.target = period.quota;

        std::size_t accepted = 0;
        const std::size_t first_day = period.begin / 24;
        const std::size_t last_day = period.end / 24;

        for (std::size_t d = first_day; d < last_day; ++d) {
            const auto& positions = day_positions[d];
            if (positions.empty()) continue;

            const auto slice = detail::reference_slice(ref, period, d * 24, candidates,
                                                       timeline, day_label_offset_hours);
            const NormalizationFrame frame = ref.raw_units
                                                 ? NormalizationFrame::identity()
                                                 : frame_from_points(slice.points);
            const std::size_t k_ref = detail::scaled_k_ref(period, slice);
            const TradeoffLine line =
                calibrate_line(slice.points, target.theta_deg, k_ref, frame);

            std::vector<detail::ScoredPoint> scored;
            scored.reserve(positions.size());
            for (std::size_t pos : positions) {
                const HourPoint& p = candidates.points[pos];
                const double s = tradeoff_score(p, frame, target.theta_deg);
                plan.scores[p.index] = s;
                scored.push_back({s, p.price, p.index, pos});
            }

            if (target.strategy == Strategy::daily) {
                // settle the whole day at once against its own quota
                std::vector<detail::ScoredPoint> below, above;
                for (const auto& sp : scored)
                    (sp.score <= line.c ? below : above).push_back(sp);

                if (below.size() > period.quota) {
                    std::sort(below.begin(), below.end(), detail::score_order);
                    row.capped += below.size() - period.quota;
                    below.resize(period.quota);
                }
                for (const auto& sp : below) {
                    chosen[sp.index] = {sp.index, sp.score, SelectionRule::below_line};
                    taken[sp.index] = 1;
                    ++row.below_line;
                }
                if (below.size() < period.quota) {
                    std::sort(above.begin(), above.end(), detail::score_order);
                    std::size_t need = period.quota - below.size();
                    for (const auto& sp : above) {
                        if (need == 0) break;
                        chosen[sp.index] = {sp.index, sp.score, SelectionRule::nearest_to_line};
                        taken[sp.index] = 1;
                        ++row.filled;
                        --need;
                    }
                }
            } else {
                // months and years accept below-line hours as they come
                for (const auto& sp : scored) {
                    if (sp.score > line.c) continue;
                    if (accepted < period.quota) {
                        chosen[sp.index] = {sp.index, sp.score, SelectionRule::below_line};
                        taken[sp.index] = 1;
                        ++accepted;
                        ++row.below_line;
                    } else {
                        ++row.capped;
                    }
                }
            }
        }

        if (target.strategy != Strategy::daily && accepted < period.quota) {
            // block-book the tail of the period with whatever was passed over
            std::size_t deficit = period.quota - accepted;
            std::vector<char> present(period.end - period.begin, 0);
            for (std::size_t d = first_day; d < last_day; ++d)
                for (std::size_t pos : day_positions[d])
                    present[candidates.points[pos].index - period.begin] = 1;
            for (std::size_t h = period.end; h-- > period.begin && deficit > 0;) {
                if (!present[h - period.begin] || taken[h]) continue;
                chosen[h] = {h, plan.scores[h], SelectionRule::end_of_period_block};
                taken[h] = 1;
                ++row.filled;
                --deficit;
            }
        }

        row.achieved = row.below_line + row.filled;
        plan.ledger.push_back(row);
    }

    plan.selected.reserve(chosen.size());
    for (const auto& [hour, entry] : chosen) plan.selected.push_back(entry);
    return plan;
}

} // namespace ptx
