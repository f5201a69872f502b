#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/normalize.hpp"
#include "ptx/series.hpp"

namespace ptx {

/**
 * Scalar score of a normalized point against a selection line at angle
 * theta (degrees from the intensity axis toward the price axis):
 *
 *   s = x * sin(theta) + y * cos(theta)
 *
 * A line drawn at that angle has constant s along it, so "below the line"
 * is exactly s <= c for the line's offset c. theta = 90 scores by price
 * alone, theta = 0 by intensity alone, theta = 45 weighs both equally.
 * The axis angles are special-cased so they ignore the other coordinate
 * exactly rather than up to rounding.
 */
inline double tradeoff_score(double x, double y, double theta_deg)
{
    if (theta_deg < 0.0 || theta_deg > 90.0)
        throw ConfigError("tradeoff_score: theta " + std::to_string(theta_deg)
                          + " outside [0, 90]");
    if (theta_deg == 0.0) return y;
    if (theta_deg == 90.0) return x;
    const double rad = theta_deg * std::numbers::pi / 180.0;
    return x * std::sin(rad) + y * std::cos(rad);
}

inline double tradeoff_score(const HourPoint& p, const NormalizationFrame& frame,
                             double theta_deg)
{
    const NormPoint n = normalize_point(p, frame);
    return tradeoff_score(n.x, n.y, theta_deg);
}

/** A calibrated selection line: points with score <= c count as below it. */
struct TradeoffLine {
    double theta_deg = 45.0;
    double c = 0.0;
};

namespace detail {

struct ScoredPoint {
    double score;
    double price;
    std::size_t index;
    std::size_t position;
};

/**
 * Deterministic order: lower score first, ties by lower raw price, then by
 * earlier hour index.
 */
inline bool score_order(const ScoredPoint& a, const ScoredPoint& b)
{
    if (a.score != b.score) return a.score < b.score;
    if (a.price != b.price) return a.price < b.price;
    return a.index < b.index;
}

inline std::vector<ScoredPoint> score_points(std::span<const HourPoint> points,
                                             const NormalizationFrame& frame, double theta_deg)
{
    validate_frame(frame);
    std::vector<ScoredPoint> scored;
    scored.reserve(points.size());
    for (std::size_t pos = 0; pos < points.size(); ++pos)
        scored.push_back({tradeoff_score(points[pos], frame, theta_deg), points[pos].price,
                          points[pos].index, pos});
    return scored;
}

} // namespace detail

/**
 * Positions (into `points`) of the k lowest-scoring hours, returned in
 * ascending position order. The score/price/index tie-break makes the
 * selected set unique.
 */
inline std::vector<std::size_t> select_k_lowest(std::span<const HourPoint> points,
                                                double theta_deg, std::size_t k,
                                                const NormalizationFrame& frame)
{
    if (k > points.size())
        throw CapacityError("select_k_lowest: k=" + std::to_string(k) + " exceeds "
                            + std::to_string(points.size()) + " candidate hours");
    auto scored = detail::score_points(points, frame, theta_deg);
    std::sort(scored.begin(), scored.end(), detail::score_order);
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].position);
    std::sort(out.begin(), out.end());
    return out;
}

/**
 * Sweeps the line out from the origin until it captures k_ref reference
 * points: c is the k_ref-th smallest score of the reference window.
 */
inline TradeoffLine calibrate_line(std::span<const HourPoint> reference, double theta_deg,
                                   std::size_t k_ref, const NormalizationFrame& frame)
{
    if (k_ref < 1 || k_ref > reference.size())
        throw CapacityError("calibrate_line: k_ref=" + std::to_string(k_ref)
                            + " outside 1.." + std::to_string(reference.size()));
    auto scored = detail::score_points(reference, frame, theta_deg);
    std::sort(scored.begin(), scored.end(), detail::score_order);
    return {theta_deg, scored[k_ref - 1].score};
}

/**
 * Every candidate at or below the line, in candidate order. The count is not
 * capped here; quota enforcement is the scheduler's business.
 */
inline std::vector<std::size_t> select_below_line(std::span<const HourPoint> points,
                                                  const TradeoffLine& line,
                                                  const NormalizationFrame& frame)
{
    validate_frame(frame);
    std::vector<std::size_t> out;
    for (std::size_t pos = 0; pos < points.size(); ++pos)
        if (tradeoff_score(points[pos], frame, line.theta_deg) <= line.c) out.push_back(pos);
    return out;
}

} // namespace ptx
