#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ptx/errors.hpp"
#include "ptx/series.hpp"

namespace ptx {

enum class ForecasterKind { autoregressive, seasonal_repeat, plugin };

/**
 * Replaceable component model. The built-in seasonal forecaster can be
 * swapped for anything honoring this contract (the original design used a
 * feed-forward network in this slot). fit() receives the component values and
 * the run seed; implementations must be deterministic for a fixed seed and
 * must tolerate being refitted at every forecast origin.
 */
class ForecastPlugin {
public:
    virtual ~ForecastPlugin() = default;
    virtual void fit(std::span<const double> values, std::uint64_t seed) = 0;
    virtual std::vector<double> predict(std::size_t horizon) const = 0;
    virtual std::string name() const = 0;
};

/**
 * One component forecaster: an AR(p) on d-times differenced values with an
 * optional MA(q) correction, a phase-aligned seasonal repeater, or a plugin.
 * Value type: fit_component returns a fitted copy, the prototype stays
 * untouched (plugins are the exception, they carry their own state).
 */
struct ComponentForecaster {
    ForecasterKind kind = ForecasterKind::autoregressive;

    // autoregressive configuration
    int p = 24;
    int d = 1;
    int q = 0;

    // seasonal_repeat configuration
    std::size_t period = 24;

    std::shared_ptr<ForecastPlugin> plug;
    std::uint64_t seed = 0;

    // fitted state
    bool fitted = false;
    std::vector<double> ar_coeffs;   // phi_1..phi_p, most recent lag first
    std::vector<double> ma_coeffs;   // theta_1..theta_q
    double intercept = 0.0;
    std::vector<double> diff_tail;   // last p values of the differenced series
    std::vector<double> resid_tail;  // last q one-step residuals
    std::vector<double> level_tails; // last value of each differencing level 0..d-1
    std::vector<double> phase_values; // seasonal_repeat: value at each phase
    std::size_t next_phase = 0;       // phase of the first future position

    static ComponentForecaster autoregressive(int p, int d = 0, int q = 0)
    {
        ComponentForecaster f;
        f.kind = ForecasterKind::autoregressive;
        f.p = p;
        f.d = d;
        f.q = q;
        return f;
    }

    static ComponentForecaster seasonal_repeat(std::size_t period)
    {
        ComponentForecaster f;
        f.kind = ForecasterKind::seasonal_repeat;
        f.period = period;
        return f;
    }

    static ComponentForecaster plugin(std::shared_ptr<ForecastPlugin> plug)
    {
        ComponentForecaster f;
        f.kind = ForecasterKind::plugin;
        f.plug = std::move(plug);
        return f;
    }
};

namespace ar {

inline std::vector<double> difference(std::span<const double> v)
{
    std::vector<double> out;
    out.reserve(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i) out.push_back(v[i] - v[i - 1]);
    return out;
}

/**
 * Solves the symmetric system A x = b in place by Gaussian elimination with
 * partial pivoting. Near-zero pivots mean a collinear design.
 */
inline std::vector<double> solve_normal_equations(std::vector<std::vector<double>> a,
                                                  std::vector<double> b)
{
    const std::size_t n = b.size();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::fabs(a[i][i]));
    const double tol = scale > 0.0 ? scale * 1e-12 : 1e-12;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < tol)
            throw DegenerateError("autoregressive fit: singular design matrix");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

/**
 * Least squares of y on the given regressor rows plus an intercept.
 * Returns [intercept, beta...].
 */
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& rows,
                                         const std::vector<double>& y)
{
    const std::size_t k = rows.empty() ? 0 : rows[0].size();
    const std::size_t dim = k + 1;
    std::vector<std::vector<double>> ata(dim, std::vector<double>(dim, 0.0));
    std::vector<double> atb(dim, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        // regressor vector with the implicit leading 1
        atb[0] += y[r];
        ata[0][0] += 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double xi = rows[r][i];
            ata[0][i + 1] += xi;
            ata[i + 1][0] += xi;
            atb[i + 1] += xi * y[r];
            for (std::size_t j = i; j < k; ++j) {
                ata[i + 1][j + 1] += xi * rows[r][j];
                if (j != i) ata[j + 1][i + 1] += xi * rows[r][j];
            }
        }
    }
    return solve_normal_equations(std::move(ata), std::move(atb));
}

inline bool all_equal(std::span<const double> v)
{
    for (double x : v)
        if (x != v[0]) return false;
    return true;
}

/**
 * True when the values are constant up to floating-point jitter, relative to
 * their own magnitude. Differenced ramps that went through summation-based
 * preprocessing are constant in exact arithmetic but not bitwise equal.
 */
inline bool nearly_constant(std::span<const double> v, double& mean_out)
{
    double mean = 0.0;
    double max_abs = 0.0;
    for (double x : v) {
        mean += x;
        max_abs = std::max(max_abs, std::fabs(x));
    }
    mean /= static_cast<double>(v.size());
    mean_out = mean;
    if (max_abs == 0.0) return true;
    double max_dev = 0.0;
    for (double x : v) max_dev = std::max(max_dev, std::fabs(x - mean));
    return max_dev <= 1e-9 * max_abs;
}

} // namespace ar

namespace detail {

inline void fit_autoregressive(ComponentForecaster& f, std::span<const double> values)
{
    const std::size_t p = static_cast<std::size_t>(f.p);
    const std::size_t d = static_cast<std::size_t>(f.d);
    const std::size_t q = static_cast<std::size_t>(f.q);
    if (f.p < 1) throw ConfigError("autoregressive fit: p must be >= 1");
    if (f.d < 0 || f.q < 0) throw ConfigError("autoregressive fit: negative order");

    const std::size_t min_len = 3 * (p + q + d + 1);
    if (values.size() < min_len)
        throw LengthError("autoregressive fit: need at least " + std::to_string(min_len)
                          + " values, got " + std::to_string(values.size()));
    for (double v : values)
        if (is_missing(v))
            throw GapError("autoregressive fit: input contains missing values");

    if (ar::all_equal(values))
        throw DegenerateError("autoregressive fit: constant series");

    // difference d times, remembering the last value at each level for the
    // inverse transform
    std::vector<double> z(values.begin(), values.end());
    f.level_tails.clear();
    for (std::size_t lvl = 0; lvl < d; ++lvl) {
        f.level_tails.push_back(z.back());
        z = ar::difference(z);
    }

    f.ar_coeffs.assign(p, 0.0);
    f.ma_coeffs.assign(q, 0.0);
    f.resid_tail.assign(q, 0.0);

    double z_mean = 0.0;
    if (ar::nearly_constant(z, z_mean)) {
        // A ramp-like input differences to a constant: the AR design is
        // collinear but the intercept-only model reproduces it exactly.
        f.intercept = z_mean;
    } else {
        std::vector<double> resid;
        const std::size_t p_long = std::min(z.size() / 4, std::max<std::size_t>(p + q, 12));
        if (q > 0) {
            // Hannan-Rissanen: residuals of a long AR feed the MA regressors.
            std::vector<std::vector<double>> rows;
            std::vector<double> y;
            for (std::size_t t = p_long; t < z.size(); ++t) {
                std::vector<double> row(p_long);
                for (std::size_t i = 0; i < p_long; ++i) row[i] = z[t - 1 - i];
                rows.push_back(std::move(row));
                y.push_back(z[t]);
            }
            const auto beta = ar::least_squares(rows, y);
            resid.assign(z.size(), 0.0);
            for (std::size_t t = p_long; t < z.size(); ++t) {
                double pred = beta[0];
                for (std::size_t i = 0; i < p_long; ++i) pred += beta[i + 1] * z[t - 1 - i];
                resid[t] = z[t] - pred;
            }
        }

        // residual lags only exist from p_long on, so rows start later with MA terms
        const std::size_t t0 = q > 0 ? std::max(p, p_long + q) : p;
        if (z.size() <= t0 + p + q + 1)
            throw LengthError("autoregressive fit: too few rows after differencing");

        std::vector<std::vector<double>> rows;
        std::vector<double> y;
        for (std::size_t t = t0; t < z.size(); ++t) {
            std::vector<double> row;
            row.reserve(p + q);
            for (std::size_t i = 0; i < p; ++i) row.push_back(z[t - 1 - i]);
            for (std::size_t i = 0; i < q; ++i) row.push_back(resid[t - 1 - i]);
            rows.push_back(std::move(row));
            y.push_back(z[t]);
        }
        const auto beta = ar::least_squares(rows, y);
        f.intercept = beta[0];
        for (std::size_t i = 0; i < p; ++i) f.ar_coeffs[i] = beta[1 + i];
        for (std::size_t i = 0; i < q; ++i) f.ma_coeffs[i] = beta[1 + p + i];
        for (std::size_t i = 0; i < q; ++i) f.resid_tail[i] = resid[z.size() - 1 - i];
    }

    f.diff_tail.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) f.diff_tail[i] = z[z.size() - 1 - i];
}

inline std::vector<double> predict_autoregressive(const ComponentForecaster& f,
                                                  std::size_t horizon)
{
    const std::size_t p = static_cast<std::size_t>(f.p);
    const std::size_t q = static_cast<std::size_t>(f.q);

    std::vector<double> recent = f.diff_tail;   // most recent first
    std::vector<double> resid = f.resid_tail;   // most recent first
    std::vector<double> z_hat;
    z_hat.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        double v = f.intercept;
        for (std::size_t i = 0; i < p; ++i) v += f.ar_coeffs[i] * recent[i];
        for (std::size_t i = 0; i < q && i < resid.size(); ++i)
            v += f.ma_coeffs[i] * resid[i];
        z_hat.push_back(v);
        if (p > 0) {
            recent.insert(recent.begin(), v);
            recent.pop_back();
        }
        if (q > 0) {
            resid.insert(resid.begin(), 0.0); // future shocks have mean zero
            resid.pop_back();
        }
    }

    // integrate back through the differencing levels, innermost first
    std::vector<double> lasts = f.level_tails;
    for (std::size_t lvl = lasts.size(); lvl-- > 0;) {
        double run = lasts[lvl];
        for (double& v : z_hat) {
            run += v;
            v = run;
        }
    }
    return z_hat;
}

} // namespace detail

/**
 * Fits a component forecaster to one decomposition component (or any plain
 * value sequence) and returns the fitted instance. A constant input to the
 * autoregressive kind is refused as degenerate; callers that can tolerate it
 * should catch DegenerateError and substitute a constant forecast.
 */
inline ComponentForecaster fit_component(std::span<const double> values, ComponentForecaster f)
{
    if (values.empty()) throw EmptyInputError("fit_component: no values");

    switch (f.kind) {
    case ForecasterKind::autoregressive:
        detail::fit_autoregressive(f, values);
        break;
    case ForecasterKind::seasonal_repeat: {
        if (f.period < 1) throw ConfigError("seasonal_repeat: period must be >= 1");
        if (values.size() < f.period)
            throw LengthError("seasonal_repeat: need at least one full period");
        f.phase_values.assign(f.period, 0.0);
        // last observed value of each phase, so predictions align by phase
        for (std::size_t i = values.size() - f.period; i < values.size(); ++i)
            f.phase_values[i % f.period] = values[i];
        f.next_phase = values.size() % f.period;
        break;
    }
    case ForecasterKind::plugin:
        if (!f.plug) throw ConfigError("plugin forecaster without a plugin instance");
        f.plug->fit(values, f.seed);
        break;
    }
    f.fitted = true;
    return f;
}

inline std::vector<double> predict_component(const ComponentForecaster& f, std::size_t horizon)
{
    if (!f.fitted) throw StateError("predict_component: forecaster is not fitted");

    switch (f.kind) {
    case ForecasterKind::autoregressive:
        return detail::predict_autoregressive(f, horizon);
    case ForecasterKind::seasonal_repeat: {
        std::vector<double> out;
        out.reserve(horizon);
        for (std::size_t h = 0; h < horizon; ++h)
            out.push_back(f.phase_values[(f.next_phase + h) % f.period]);
        return out;
    }
    case ForecasterKind::plugin: {
        auto out = f.plug->predict(horizon);
        if (out.size() != horizon)
            throw StateError("plugin '" + f.plug->name() + "' returned "
                             + std::to_string(out.size()) + " values for horizon "
                             + std::to_string(horizon));
        return out;
    }
    }
    return {};
}

} // namespace ptx
