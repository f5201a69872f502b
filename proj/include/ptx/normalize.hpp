#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/series.hpp"

namespace ptx {

/**
 * Min-max bounds that map raw (price, intensity) pairs onto the unit square
 * used by the trade-off geometry. A frame is always captured from some
 * reference window and then applied to other windows, so scores stay
 * comparable across days even when a single day's spread is narrow.
 */
struct NormalizationFrame {
    double price_min = 0.0;
    double price_max = 1.0;
    double intensity_min = 0.0;
    double intensity_max = 1.0;

    /** Pass-through frame for raw-units mode: x = price, y = intensity. */
    static NormalizationFrame identity() { return {0.0, 1.0, 0.0, 1.0}; }
};

/** Normalized coordinates: x on the price axis, y on the intensity axis. */
struct NormPoint {
    double x = 0.0;
    double y = 0.0;
};

inline void validate_frame(const NormalizationFrame& f)
{
    if (!(f.price_max > f.price_min) || !(f.intensity_max > f.intensity_min))
        throw FrameError("normalization frame has zero or negative width");
}

inline NormalizationFrame frame_from_points(std::span<const HourPoint> points)
{
    if (points.empty())
        throw EmptyInputError("frame_from_points: no points");
    NormalizationFrame f;
    f.price_min = f.price_max = points[0].price;
    f.intensity_min = f.intensity_max = points[0].intensity;
    for (const HourPoint& p : points) {
        f.price_min = std::min(f.price_min, p.price);
        f.price_max = std::max(f.price_max, p.price);
        f.intensity_min = std::min(f.intensity_min, p.intensity);
        f.intensity_max = std::max(f.intensity_max, p.intensity);
    }
    validate_frame(f);
    return f;
}

inline NormPoint normalize_point(const HourPoint& p, const NormalizationFrame& f)
{
    return {(p.price - f.price_min) / (f.price_max - f.price_min),
            (p.intensity - f.intensity_min) / (f.intensity_max - f.intensity_min)};
}

inline std::vector<NormPoint> normalize_points(std::span<const HourPoint> points,
                                               const NormalizationFrame& f)
{
    validate_frame(f);
    std::vector<NormPoint> out;
    out.reserve(points.size());
    for (const HourPoint& p : points) out.push_back(normalize_point(p, f));
    return out;
}

} // namespace ptx
