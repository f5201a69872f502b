#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/time.hpp"

namespace ptx {

enum class Quantity { price, co2_intensity, generation };

inline const char* quantity_name(Quantity q)
{
    switch (q) {
    case Quantity::price: return "price";
    case Quantity::co2_intensity: return "co2_intensity";
    case Quantity::generation: return "generation";
    }
    return "?";
}

inline const char* default_unit(Quantity q)
{
    switch (q) {
    case Quantity::price: return "EUR/MWh";
    case Quantity::co2_intensity: return "gCO2eq/kWh";
    case Quantity::generation: return "MWh";
    }
    return "";
}

/** Missing hours are carried in place as quiet NaN so indexes stay aligned. */
constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

/**
 * A gap-free hourly grid of values for one market area and one quantity.
 * values[i] belongs to the hour starting at start + i. Missing observations
 * are NaN markers, never absent slots, so arithmetic between series can rely
 * on index alignment alone.
 */
struct HourlySeries {
    std::string area;
    Quantity quantity = Quantity::price;
    std::string unit;
    HourStamp start{};
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    HourStamp stamp_at(std::size_t i) const { return start + static_cast<std::int64_t>(i); }
    HourStamp end() const { return start + static_cast<std::int64_t>(values.size()); }

    std::size_t missing_count() const
    {
        std::size_t n = 0;
        for (double v : values)
            if (is_missing(v)) ++n;
        return n;
    }
};

/** One schedulable hour with both decision inputs present. */
struct HourPoint {
    std::size_t index = 0; // hour offset from the paired window start
    double price = 0.0;
    double intensity = 0.0;
};

/**
 * The hour-aligned join of a price series and an intensity series over their
 * overlapping range. points holds one entry per hour where both values are
 * present; hours missing on either side are simply absent, so point indexes
 * can be sparse while remaining monotone.
 */
struct PairedSeries {
    std::string area;
    HourStamp start{};       // first hour of the overlap window
    std::size_t span = 0;    // hours in the overlap window
    std::vector<HourPoint> points;

    HourStamp stamp_of(const HourPoint& p) const
    {
        return start + static_cast<std::int64_t>(p.index);
    }
};

/**
 * Joins a price series and a CO2-intensity series on their common hours.
 * Both inputs must describe the same market area; the overlap of their
 * timestamp ranges must be non-empty.
 */
inline PairedSeries pair_series(const HourlySeries& price, const HourlySeries& intensity)
{
    if (price.quantity != Quantity::price)
        throw UnitError("pair_series: first argument carries " + std::string(quantity_name(price.quantity))
                        + ", expected price");
    if (intensity.quantity != Quantity::co2_intensity)
        throw UnitError("pair_series: second argument carries "
                        + std::string(quantity_name(intensity.quantity)) + ", expected co2_intensity");
    if (price.area != intensity.area)
        throw UnitError("pair_series: area mismatch '" + price.area + "' vs '" + intensity.area + "'");

    const HourStamp lo = std::max(price.start, intensity.start);
    const HourStamp hi = std::min(price.end(), intensity.end());
    if (lo >= hi)
        throw EmptyOverlapError("pair_series: series for '" + price.area + "' do not overlap");

    PairedSeries out;
    out.area = price.area;
    out.start = lo;
    out.span = static_cast<std::size_t>(hi - lo);
    out.points.reserve(out.span);
    for (std::size_t i = 0; i < out.span; ++i) {
        const auto pi = static_cast<std::size_t>(lo - price.start) + i;
        const auto ii = static_cast<std::size_t>(lo - intensity.start) + i;
        const double p = price.values[pi];
        const double c = intensity.values[ii];
        if (is_missing(p) || is_missing(c)) continue;
        out.points.push_back({i, p, c});
    }
    return out;
}

} // namespace ptx
