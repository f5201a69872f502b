#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ptx/decompose.hpp"
#include "ptx/errors.hpp"
#include "ptx/forecaster.hpp"
#include "ptx/series.hpp"
#include "ptx/stats.hpp"
#include "ptx/time.hpp"

namespace ptx {

/**
 * Configuration of the decomposition-based forecaster: split the training
 * window into trend + seasonal + random, forecast each component separately,
 * sum the component forecasts. The three prototypes are unfitted component
 * forecasters; the seasonal slot is where a learned model can be plugged in.
 */
struct Method1Config {
    std::size_t period = 24;
    std::size_t training_window = 2160; // hours; 0 means use the whole series
    EdgePolicy edge_policy = EdgePolicy::extend_linear;
    ComponentForecaster trend = ComponentForecaster::autoregressive(24, 1);
    ComponentForecaster seasonal = ComponentForecaster::seasonal_repeat(24);
    ComponentForecaster random = ComponentForecaster::autoregressive(24, 1);
    std::uint64_t seed = 0;
};

struct ForecastResult {
    HourStamp origin{};   // timestamp of the last training observation
    std::size_t horizon = 0;
    std::size_t training_hours = 0;
    std::vector<double> values;
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> random;
    // true where the component's model fit was refused as degenerate and a
    // constant forecast was substituted
    bool trend_fallback = false;
    bool random_fallback = false;
};

namespace detail {

/**
 * Fit-and-predict with the constant-forecast fallback: a component whose
 * model fit is degenerate (constant trend, all-zero remainder) forecasts its
 * last value flat.
 */
inline std::vector<double> forecast_component(std::span<const double> values,
                                              ComponentForecaster proto, std::uint64_t seed,
                                              std::size_t horizon, bool* fell_back)
{
    proto.seed = seed;
    if (fell_back) *fell_back = false;
    try {
        const ComponentForecaster fitted = fit_component(values, proto);
        return predict_component(fitted, horizon);
    } catch (const DegenerateError&) {
        if (fell_back) *fell_back = true;
        return std::vector<double>(horizon, values.back());
    }
}

} // namespace detail

/**
 * Forecasts `horizon` hours past the end of the series from its last
 * training_window hours. The series must be gap-free over that window.
 */
inline ForecastResult method1_forecast(const HourlySeries& series, std::size_t horizon,
                                       const Method1Config& config)
{
    if (horizon == 0) throw ConfigError("method1_forecast: horizon must be >= 1");
    if (config.seasonal.kind == ForecasterKind::seasonal_repeat
        && config.seasonal.period != config.period)
        throw ConfigError("method1_forecast: seasonal period "
                          + std::to_string(config.seasonal.period)
                          + " does not match decomposition period "
                          + std::to_string(config.period));

    const std::size_t n = series.values.size();
    const std::size_t window = config.training_window == 0 ? n : config.training_window;
    if (window > n)
        throw RangeError("method1_forecast: training window " + std::to_string(window)
                         + " exceeds series length " + std::to_string(n));

    const std::span<const double> train(series.values.data() + (n - window), window);
    const Decomposition dec = decompose(train, config.period, config.edge_policy);

    ForecastResult r;
    r.origin = series.stamp_at(n - 1);
    r.horizon = horizon;
    r.training_hours = window;
    r.trend = detail::forecast_component(dec.trend, config.trend, config.seed, horizon,
                                         &r.trend_fallback);
    r.seasonal =
        detail::forecast_component(dec.seasonal, config.seasonal, config.seed, horizon, nullptr);
    r.random = detail::forecast_component(dec.random, config.random, config.seed, horizon,
                                          &r.random_fallback);

    r.values.resize(horizon);
    for (std::size_t h = 0; h < horizon; ++h)
        r.values[h] = r.trend[h] + r.seasonal[h] + r.random[h];
    return r;
}

/**
 * Day-ahead simulation settings. Delivery days run on market-local civil
 * time expressed as a fixed offset; the auction origin for day D is noon on
 * D-1 local, so the first `skip` forecast steps bridge the afternoon and
 * evening of D-1 and steps skip..skip+23 are day D itself.
 */
struct RollingConfig {
    Method1Config model;
    std::size_t horizon = 36;
    std::size_t skip = 12;
    int market_utc_offset_hours = 0;
    bool reuse_fit = false;       // estimate coefficients at the first origin only
    HourStamp first_delivery_day{}; // local midnight of the first delivery day
    std::size_t days = 0;
};

struct RollingDayInfo {
    HourStamp origin{};         // last training observation (UTC)
    HourStamp delivery_start{}; // first delivered hour (UTC)
    bool refit = true;
    bool trend_fallback = false;
    bool random_fallback = false;
};

struct RollingResult {
    HourlySeries forecast; // 24 values per delivery day, consecutive
    std::vector<RollingDayInfo> days;
};

namespace detail {

/**
 * Reuses estimated coefficients but re-anchors the model state (difference
 * tails, level tails, phase store) at the end of the new window.
 */
inline ComponentForecaster reseed_state(ComponentForecaster f, std::span<const double> values)
{
    switch (f.kind) {
    case ForecasterKind::autoregressive: {
        const auto p = static_cast<std::size_t>(f.p);
        const auto d = static_cast<std::size_t>(f.d);
        if (values.size() < p + d + 1)
            throw LengthError("reseed_state: window shorter than model order");
        std::vector<double> z(values.begin(), values.end());
        f.level_tails.clear();
        for (std::size_t lvl = 0; lvl < d; ++lvl) {
            f.level_tails.push_back(z.back());
            z = ar::difference(z);
        }
        f.diff_tail.assign(p, 0.0);
        for (std::size_t i = 0; i < p; ++i) f.diff_tail[i] = z[z.size() - 1 - i];
        // one-step residuals are not tracked across origins; mean-zero shocks
        f.resid_tail.assign(static_cast<std::size_t>(f.q), 0.0);
        return f;
    }
    case ForecasterKind::seasonal_repeat:
        return fit_component(values, std::move(f));
    case ForecasterKind::plugin:
        return fit_component(values, std::move(f));
    }
    return f;
}

} // namespace detail

/**
 * Runs the day-ahead loop: one forecast per delivery day, produced at that
 * day's origin from the training window strictly before the origin. No value
 * at or after an origin can influence that day's forecast.
 */
inline RollingResult rolling_day_ahead(const HourlySeries& series, const RollingConfig& config)
{
    if (config.days == 0) throw ConfigError("rolling_day_ahead: days must be >= 1");
    if (config.horizon < config.skip + 24)
        throw ConfigError("rolling_day_ahead: horizon " + std::to_string(config.horizon)
                          + " cannot cover skip " + std::to_string(config.skip)
                          + " plus a 24h delivery day");
    const std::size_t window = config.model.training_window;
    if (window == 0)
        throw ConfigError("rolling_day_ahead: an explicit training window is required");

    const HourStamp first_day_utc =
        config.first_delivery_day - config.market_utc_offset_hours;

    RollingResult out;
    out.forecast.area = series.area;
    out.forecast.quantity = series.quantity;
    out.forecast.unit = series.unit;
    out.forecast.start = first_day_utc;
    out.forecast.values.reserve(config.days * 24);
    out.days.reserve(config.days);

    ComponentForecaster trend_model, random_model;
    bool have_models = false;

    for (std::size_t day = 0; day < config.days; ++day) {
        const HourStamp day_start = first_day_utc + static_cast<std::int64_t>(24 * day);
        const std::int64_t first_forecast = (day_start - series.start) - config.skip;
        if (first_forecast < static_cast<std::int64_t>(window))
            throw RangeError("rolling_day_ahead: only " + std::to_string(first_forecast)
                             + "h of history before the origin for "
                             + format_date(day_start + config.market_utc_offset_hours)
                             + ", need " + std::to_string(window));
        const auto origin_end = static_cast<std::size_t>(first_forecast);

        HourlySeries train;
        train.area = series.area;
        train.quantity = series.quantity;
        train.unit = series.unit;
        train.start = series.stamp_at(origin_end - window);
        train.values.assign(series.values.begin() + (origin_end - window),
                            series.values.begin() + origin_end);

        RollingDayInfo info;
        info.origin = series.stamp_at(origin_end - 1);
        info.delivery_start = day_start;
        info.refit = !(config.reuse_fit && have_models);

        std::vector<double> day_values;
        if (info.refit) {
            const ForecastResult r = method1_forecast(train, config.horizon, config.model);
            info.trend_fallback = r.trend_fallback;
            info.random_fallback = r.random_fallback;
            day_values.assign(r.values.begin() + config.skip,
                              r.values.begin() + config.skip + 24);
            if (config.reuse_fit) {
                // Re-run the component fits once to keep reusable models.
                const Decomposition dec =
                    decompose(train.values, config.model.period, config.model.edge_policy);
                try {
                    ComponentForecaster t = config.model.trend;
                    t.seed = config.model.seed;
                    trend_model = fit_component(dec.trend, t);
                    ComponentForecaster rm = config.model.random;
                    rm.seed = config.model.seed;
                    random_model = fit_component(dec.random, rm);
                    have_models = true;
                } catch (const DegenerateError&) {
                    have_models = false; // fall back to refitting daily
                }
            }
        } else {
            const Decomposition dec =
                decompose(train.values, config.model.period, config.model.edge_policy);
            const ComponentForecaster trend_f = detail::reseed_state(trend_model, dec.trend);
            const ComponentForecaster random_f = detail::reseed_state(random_model, dec.random);
            ComponentForecaster seasonal_proto = config.model.seasonal;
            seasonal_proto.seed = config.model.seed;
            const ComponentForecaster seasonal_f =
                fit_component(dec.seasonal, std::move(seasonal_proto));
            const auto tv = predict_component(trend_f, config.horizon);
            const auto sv = predict_component(seasonal_f, config.horizon);
            const auto rv = predict_component(random_f, config.horizon);
            day_values.resize(24);
            for (std::size_t h = 0; h < 24; ++h)
                day_values[h] = tv[config.skip + h] + sv[config.skip + h] + rv[config.skip + h];
        }

        out.forecast.values.insert(out.forecast.values.end(), day_values.begin(),
                                   day_values.end());
        out.days.push_back(info);
    }
    return out;
}

/** Fit quality of a forecast series against the realized values. */
struct ForecastEvaluation {
    stats::OlsFit fit;              // actual regressed on forecast
    double correlation = 0.0;
    stats::SummaryStats forecast_stats;
    stats::SummaryStats actual_stats;
    std::size_t n = 0;
};

inline ForecastEvaluation evaluate_forecast(const HourlySeries& forecast,
                                            const HourlySeries& actual)
{
    if (forecast.quantity != actual.quantity)
        throw UnitError("evaluate_forecast: quantity mismatch");

    const HourStamp lo = std::max(forecast.start, actual.start);
    const HourStamp hi = std::min(forecast.end(), actual.end());
    if (lo >= hi) throw EmptyOverlapError("evaluate_forecast: no overlapping hours");

    std::vector<double> f, a;
    for (HourStamp t = lo; t < hi; t += 1) {
        const double fv = forecast.values[static_cast<std::size_t>(t - forecast.start)];
        const double av = actual.values[static_cast<std::size_t>(t - actual.start)];
        if (is_missing(fv) || is_missing(av)) continue;
        f.push_back(fv);
        a.push_back(av);
    }
    if (f.empty()) throw EmptyInputError("evaluate_forecast: no jointly present hours");

    ForecastEvaluation ev;
    ev.n = f.size();
    ev.fit = stats::ols_fit(f, a);
    ev.correlation = stats::pearson_correlation(f, a);
    ev.forecast_stats = stats::summary_stats(std::span<const double>(f));
    ev.actual_stats = stats::summary_stats(std::span<const double>(a));
    return ev;
}

} // namespace ptx
