#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/series.hpp"

namespace ptx {
namespace stats {

/**
 * Five-number summary plus mean and sample standard deviation, the row format
 * used by the dataset characterization tables.
 */
struct SummaryStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

namespace detail {

/**
 * Linear-interpolation quantile on a sorted vector (the R type-7 rule):
 * h = (n-1)p, result = v[floor(h)] + frac(h) * (v[floor(h)+1] - v[floor(h)]).
 */
inline double quantile_sorted(const std::vector<double>& sorted, double p)
{
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double mean_of(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace detail

inline SummaryStats summary_stats(std::span<const double> values)
{
    std::vector<double> clean;
    clean.reserve(values.size());
    for (double v : values)
        if (!is_missing(v)) clean.push_back(v);
    if (clean.empty()) throw EmptyInputError("summary_stats: no non-missing values");

    std::sort(clean.begin(), clean.end());
    SummaryStats s;
    s.n = clean.size();
    s.min = clean.front();
    s.max = clean.back();
    s.q1 = detail::quantile_sorted(clean, 0.25);
    s.median = detail::quantile_sorted(clean, 0.50);
    s.q3 = detail::quantile_sorted(clean, 0.75);
    s.mean = detail::mean_of(clean);

    double ss = 0.0;
    for (double v : clean) {
        const double d = v - s.mean;
        ss += d * d;
    }
    s.sd = clean.size() > 1 ? std::sqrt(ss / static_cast<double>(clean.size() - 1)) : 0.0;
    return s;
}

inline SummaryStats summary_stats(const HourlySeries& series)
{
    return summary_stats(std::span<const double>(series.values));
}

inline double pearson_correlation(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw LengthError("pearson_correlation: length mismatch");
    if (x.size() < 2)
        throw LengthError("pearson_correlation: need at least 2 observations");

    const double mx = detail::mean_of(x);
    const double my = detail::mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateError("pearson_correlation: zero variance input");
    return sxy / std::sqrt(sxx * syy);
}

namespace detail {

inline double ln_gamma(double x) { return std::lgamma(x); }

/** Continued fraction for the regularized incomplete beta (Lentz's method). */
inline double betacf(double a, double b, double x)
{
    constexpr int max_iter = 300;
    constexpr double eps = 1e-14;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

/** Regularized incomplete beta function I_x(a, b). */
inline double incomplete_beta(double a, double b, double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front =
        ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

/**
 * Two-sided p-value of a t statistic with nu degrees of freedom,
 * P(|T| >= |t|) = I_{nu/(nu+t^2)}(nu/2, 1/2).
 */
inline double t_two_sided_p(double t, double nu)
{
    if (!std::isfinite(t)) return 0.0;
    return incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t));
}

} // namespace detail

/**
 * Simple linear regression y = intercept + slope * x with the usual
 * goodness-of-fit numbers. p_value is the two-sided test of slope == 0.
 */
struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

inline OlsFit ols_fit(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw LengthError("ols_fit: length mismatch");
    if (x.size() < 3)
        throw LengthError("ols_fit: need at least 3 observations");

    const std::size_t n = x.size();
    const double mx = detail::mean_of(x);
    const double my = detail::mean_of(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw DegenerateError("ols_fit: regressor has zero variance");

    OlsFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;

    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    // Constant y fits itself exactly; report a perfect fit rather than 0/0.
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);

    const double nu = static_cast<double>(n - 2);
    const double se2 = ss_res / nu / sxx;
    if (se2 <= 0.0) {
        fit.p_value = fit.slope == 0.0 ? 1.0 : 0.0;
    } else {
        fit.p_value = detail::t_two_sided_p(fit.slope / std::sqrt(se2), nu);
    }
    return fit;
}

} // namespace stats
} // namespace ptx
