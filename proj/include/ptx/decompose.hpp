#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/series.hpp"

namespace ptx {

/** How to fill trend values at the edges where the centered window ran out. */
enum class EdgePolicy {
    extend_linear, // continue the slope of the nearest defined trend segment
    hold,          // repeat the nearest defined trend value
};

inline const char* edge_policy_name(EdgePolicy p)
{
    return p == EdgePolicy::extend_linear ? "extend_linear" : "hold";
}

/**
 * Additive split of an hourly signal: original = trend + seasonal + random.
 * trend is the centered moving average with edges filled per edge_policy;
 * the identity above holds exactly everywhere by construction. seasonal is
 * period-periodic with zero mean over one period. interior_begin/interior_end
 * bound the positions where the moving average itself was defined.
 */
struct Decomposition {
    std::size_t period = 24;
    EdgePolicy edge_policy = EdgePolicy::extend_linear;
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> random;
    std::size_t interior_begin = 0;
    std::size_t interior_end = 0;
};

/**
 * Centered moving average of window m. For even m this is the classic 2xm
 * average: the mean of the two m-windows straddling position i, equivalent to
 * half weights on the two extreme lags. Positions whose window would leave
 * the series are returned as missing markers: the first and last m/2 for even
 * m, (m-1)/2 for odd m.
 */
inline std::vector<double> centered_moving_average(std::span<const double> values, std::size_t m)
{
    if (m < 2) throw LengthError("centered_moving_average: window must be >= 2");
    if (values.size() < m + 1)
        throw LengthError("centered_moving_average: need at least m+1 values, got "
                          + std::to_string(values.size()));
    for (double v : values)
        if (is_missing(v))
            throw GapError("centered_moving_average: input contains missing values");

    const std::size_t n = values.size();
    std::vector<double> out(n, kMissing);
    const std::size_t half = m / 2;

    if (m % 2 == 0) {
        for (std::size_t i = half; i + half < n; ++i) {
            double acc = 0.5 * values[i - half] + 0.5 * values[i + half];
            for (std::size_t k = i - half + 1; k + 1 <= i + half; ++k) acc += values[k];
            out[i] = acc / static_cast<double>(m);
        }
    } else {
        for (std::size_t i = half; i + half < n; ++i) {
            double acc = 0.0;
            for (std::size_t k = i - half; k <= i + half; ++k) acc += values[k];
            out[i] = acc / static_cast<double>(m);
        }
    }
    return out;
}

/**
 * Classical additive decomposition: centered moving average for the trend,
 * per-phase means of the detrended interior for the seasonal (re-centered to
 * zero mean over one period), remainder for the random part. Trend edges are
 * filled per edge_policy so downstream forecasters see full-length
 * components.
 */
inline Decomposition decompose(std::span<const double> values, std::size_t period,
                               EdgePolicy edge_policy = EdgePolicy::extend_linear)
{
    if (period < 2) throw LengthError("decompose: period must be >= 2");
    if (values.size() < 3 * period)
        throw LengthError("decompose: need at least 3 periods ("
                          + std::to_string(3 * period) + " values), got "
                          + std::to_string(values.size()));

    const std::size_t n = values.size();
    Decomposition d;
    d.period = period;
    d.edge_policy = edge_policy;
    d.trend = centered_moving_average(values, period);

    std::size_t begin = 0;
    while (begin < n && is_missing(d.trend[begin])) ++begin;
    std::size_t end = n;
    while (end > begin && is_missing(d.trend[end - 1])) --end;
    d.interior_begin = begin;
    d.interior_end = end;

    // Per-phase means over the interior only; edge fills must not leak in.
    std::vector<double> phase_sum(period, 0.0);
    std::vector<std::size_t> phase_count(period, 0);
    for (std::size_t i = begin; i < end; ++i) {
        phase_sum[i % period] += values[i] - d.trend[i];
        ++phase_count[i % period];
    }
    std::vector<double> phase(period, 0.0);
    double grand = 0.0;
    for (std::size_t k = 0; k < period; ++k) {
        if (phase_count[k] == 0)
            throw LengthError("decompose: interior does not cover every phase");
        phase[k] = phase_sum[k] / static_cast<double>(phase_count[k]);
        grand += phase[k];
    }
    grand /= static_cast<double>(period);
    for (double& p : phase) p -= grand;

    if (edge_policy == EdgePolicy::extend_linear && end - begin >= 2) {
        const double left_slope = d.trend[begin + 1] - d.trend[begin];
        for (std::size_t i = begin; i-- > 0;)
            d.trend[i] = d.trend[begin] - left_slope * static_cast<double>(begin - i);
        const double right_slope = d.trend[end - 1] - d.trend[end - 2];
        for (std::size_t i = end; i < n; ++i)
            d.trend[i] = d.trend[end - 1] + right_slope * static_cast<double>(i - end + 1);
    } else {
        for (std::size_t i = 0; i < begin; ++i) d.trend[i] = d.trend[begin];
        for (std::size_t i = end; i < n; ++i) d.trend[i] = d.trend[end - 1];
    }

    d.seasonal.resize(n);
    d.random.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.seasonal[i] = phase[i % period];
        d.random[i] = values[i] - d.trend[i] - d.seasonal[i];
    }
    return d;
}

} // namespace ptx
