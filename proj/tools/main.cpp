#include <cstdint>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptx/config.hpp"
#include "ptx/evaluation.hpp"
#include "ptx/ingest.hpp"
#include "ptx/method1.hpp"
#include "ptx/report.hpp"
#include "ptx/schedule.hpp"
#include "ptx/series.hpp"
#include "ptx/time.hpp"
#include "ptx/tradeoff.hpp"

using nlohmann::json;
using namespace ptx;

namespace {

struct Window {
    CivilDate first_day{};     // local calendar date of the first delivery day
    HourStamp local_midnight{};
    HourStamp utc_start{};
    std::size_t hours = 0;
};

Window run_window(const RunConfig& cfg)
{
    if (cfg.start_date.empty())
        throw ConfigError("run.start is required for this command");
    if (cfg.days < 1) throw ConfigError("run.days must be at least 1");
    Window w;
    w.local_midnight = parse_date(cfg.start_date);
    w.first_day = civil_date_of(w.local_midnight);
    w.utc_start = w.local_midnight - cfg.market_utc_offset_hours;
    w.hours = static_cast<std::size_t>(cfg.days) * 24;
    return w;
}

CsvSpec spec_for(const RunConfig& cfg, const AreaConfig& area, Quantity q)
{
    CsvSpec spec;
    switch (q) {
        case Quantity::price: spec.path = area.price_path; break;
        case Quantity::co2_intensity: spec.path = area.intensity_path; break;
        case Quantity::generation: spec.path = area.generation_path; break;
    }
    if (spec.path.empty())
        throw ConfigError("area." + area.code + " has no " + quantity_name(q)
                          + " file configured");
    spec.timestamp_column = cfg.csv_timestamp_column;
    spec.value_column = cfg.csv_value_column;
    spec.area = area.code;
    spec.quantity = q;
    spec.tz_offset_minutes = area.tz_offset_minutes;
    spec.field_separator = cfg.csv_field_separator;
    spec.decimal_separator = cfg.csv_decimal_separator;
    return spec;
}

HourlySeries load_repaired(const RunConfig& cfg, const AreaConfig& area, Quantity q,
                           IngestReport* report = nullptr)
{
    const HourlySeries raw = load_hourly_csv(spec_for(cfg, area, q), report);
    std::size_t filled = 0;
    HourlySeries fixed = repair_series(raw, cfg.gap_policy,
                                       static_cast<std::size_t>(cfg.max_gap_hours), &filled);
    if (report) {
        report->gap_policy = gap_policy_name(cfg.gap_policy);
        report->gaps_filled = filled;
    }
    return fixed;
}

HourlySeries slice_series(const HourlySeries& s, HourStamp lo, std::size_t hours)
{
    if (lo < s.start || s.size() < hours
        || s.stamp_at(s.size() - hours) < lo)
        throw RangeError(std::string(quantity_name(s.quantity)) + " series for " + s.area
                         + " does not cover " + format_utc(lo) + " plus "
                         + std::to_string(hours) + "h");
    const auto off = static_cast<std::size_t>(lo - s.start);
    HourlySeries out;
    out.area = s.area;
    out.quantity = s.quantity;
    out.unit = s.unit;
    out.start = lo;
    out.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(off),
                      s.values.begin() + static_cast<std::ptrdiff_t>(off + hours));
    return out;
}

Method1Config model_from(const RunConfig& cfg)
{
    Method1Config m;
    m.period = static_cast<std::size_t>(cfg.seasonal_period);
    m.training_window = cfg.training_window;
    m.trend = ComponentForecaster::autoregressive(cfg.trend_p, cfg.trend_d, cfg.trend_q);
    m.seasonal = ComponentForecaster::seasonal_repeat(static_cast<std::size_t>(cfg.seasonal_period));
    m.random = ComponentForecaster::autoregressive(cfg.random_p, cfg.random_d, cfg.random_q);
    m.seed = cfg.seed;
    return m;
}

RollingResult roll_forecast(const RunConfig& cfg, const HourlySeries& series, const Window& w)
{
    RollingConfig rc;
    rc.model = model_from(cfg);
    rc.horizon = cfg.horizon;
    rc.skip = cfg.skip;
    rc.market_utc_offset_hours = cfg.market_utc_offset_hours;
    rc.reuse_fit = cfg.reuse_fit;
    rc.first_delivery_day = w.local_midnight;
    rc.days = static_cast<std::size_t>(cfg.days);
    return rolling_day_ahead(series, rc);
}

json config_echo(const RunConfig& cfg)
{
    json out = json::object();
    for (const auto& [key, value] : cfg.raw) out[key] = value;
    return out;
}

void write_manifest(ReportSink& sink, const RunConfig& cfg, const std::string& command,
                    const json& results = json())
{
    json j;
    j["command"] = command;
    j["version"] = PTX_VERSION;
    j["config"] = config_echo(cfg);
    json outputs = json::object();
    for (const auto& [name, digest] : sink.checksums()) outputs[name] = digest;
    j["outputs"] = outputs;
    if (!results.is_null()) j["results"] = results;
    sink.write("run.json", j.dump(2) + "\n");
}

json fit_json(const stats::OlsFit& fit)
{
    return json{{"slope", fit.slope},
                {"intercept", fit.intercept},
                {"r_squared", fit.r_squared},
                {"p_value", fit.p_value},
                {"n", fit.n}};
}

int cmd_ingest(const RunConfig& cfg)
{
    ReportSink sink(cfg.out_dir);
    json reports = json::array();
    for (const auto& area : cfg.areas) {
        for (Quantity q : {Quantity::price, Quantity::co2_intensity, Quantity::generation}) {
            const bool present = (q == Quantity::price && !area.price_path.empty())
                                 || (q == Quantity::co2_intensity && !area.intensity_path.empty())
                                 || (q == Quantity::generation && !area.generation_path.empty());
            if (!present) continue;
            IngestReport rep;
            const HourlySeries series = load_repaired(cfg, area, q, &rep);
            std::ostringstream body;
            write_series_csv(body, series);
            const std::string name = area.code + "_" + quantity_name(q) + ".csv";
            sink.write(name, body.str());
            reports.push_back(json{{"file", name},
                                   {"source", rep.path},
                                   {"area", rep.area},
                                   {"quantity", quantity_name(q)},
                                   {"unit", series.unit},
                                   {"rows_read", rep.rows_read},
                                   {"rows_dropped", rep.rows_dropped},
                                   {"gaps_found", rep.gaps_found},
                                   {"gaps_filled", rep.gaps_filled},
                                   {"gap_policy", rep.gap_policy},
                                   {"first", format_utc(rep.first)},
                                   {"last", format_utc(rep.last)}});
        }
    }
    if (reports.empty()) throw ConfigError("no input files configured");
    sink.write("ingest_report.json", reports.dump(2) + "\n");
    write_manifest(sink, cfg, "ingest");
    std::cout << "ingested " << reports.size() << " file(s) into " << sink.dir().string()
              << "\n";
    return 0;
}

int cmd_forecast(const RunConfig& cfg)
{
    const Window w = run_window(cfg);
    const AreaConfig& area = cfg.main_area();
    ReportSink sink(cfg.out_dir);
    json quality = json::object();

    for (Quantity q : {Quantity::price, Quantity::co2_intensity}) {
        const HourlySeries actual = load_repaired(cfg, area, q);
        const RollingResult rolled = roll_forecast(cfg, actual, w);
        const ForecastEvaluation eval = evaluate_forecast(rolled.forecast, actual);

        sink.write("forecast_" + area.code + "_" + quantity_name(q) + ".csv",
                   report::forecast_csv(rolled.forecast, actual));

        std::size_t refits = 0, trend_fallbacks = 0, random_fallbacks = 0;
        for (const auto& day : rolled.days) {
            refits += day.refit ? 1u : 0u;
            trend_fallbacks += day.trend_fallback ? 1u : 0u;
            random_fallbacks += day.random_fallback ? 1u : 0u;
        }
        quality[quantity_name(q)] =
            json{{"fit", fit_json(eval.fit)},
                 {"correlation", eval.correlation},
                 {"hours_compared", eval.n},
                 {"days", rolled.days.size()},
                 {"refits", refits},
                 {"trend_fallbacks", trend_fallbacks},
                 {"random_fallbacks", random_fallbacks}};
    }

    sink.write("forecast_quality.json", quality.dump(2) + "\n");
    write_manifest(sink, cfg, "forecast", quality);
    std::cout << "forecast " << cfg.days << " day(s) for " << area.code << " into "
              << sink.dir().string() << "\n";
    return 0;
}

int cmd_schedule(const RunConfig& cfg, bool use_actuals)
{
    const Window w = run_window(cfg);
    const AreaConfig& area = cfg.main_area();
    ReportSink sink(cfg.out_dir);

    const HourlySeries price = load_repaired(cfg, area, Quantity::price);
    const HourlySeries intensity = load_repaired(cfg, area, Quantity::co2_intensity);
    const PairedSeries history = pair_series(price, intensity);

    PairedSeries candidates;
    if (use_actuals) {
        candidates = pair_series(slice_series(price, w.utc_start, w.hours),
                                 slice_series(intensity, w.utc_start, w.hours));
    } else {
        const RollingResult fc_price = roll_forecast(cfg, price, w);
        const RollingResult fc_intensity = roll_forecast(cfg, intensity, w);
        candidates = pair_series(fc_price.forecast, fc_intensity.forecast);
    }

    ScheduleTarget target;
    target.flh_year = cfg.flh_year;
    target.strategy = cfg.strategy;
    target.theta_deg = cfg.theta_deg;

    ReferenceConfig ref =
        (use_actuals && cfg.reference == "auto")
            ? resolve_reference("period_itself", cfg.strategy, cfg.raw_units)
            : resolve_reference(cfg.reference, cfg.strategy, cfg.raw_units);

    const SchedulePlan plan =
        schedule(target, history, candidates, ref, cfg.market_utc_offset_hours);
    const std::vector<std::size_t> hours = selected_hours(plan);

    sink.write("plan.csv", report::plan_csv(plan));
    sink.write("ledger.csv", report::ledger_csv(plan));

    json summary;
    summary["area"] = area.code;
    summary["flh_year"] = cfg.flh_year;
    summary["strategy"] = strategy_name(cfg.strategy);
    summary["theta_deg"] = cfg.theta_deg;
    summary["reference"] = reference_window_name(ref.window);
    summary["inputs"] = use_actuals ? "actuals" : "forecasts";
    summary["selected_hours"] = hours.size();
    summary["horizon_hours"] = plan.horizon;

    const SelectionMeans planned = means_over_hours(candidates, hours);
    summary["planned_means"] =
        json{{"price", planned.price}, {"intensity", planned.intensity}, {"hours", planned.n}};
    try {
        const PairedSeries realized = pair_series(slice_series(price, w.utc_start, w.hours),
                                                  slice_series(intensity, w.utc_start, w.hours));
        const SelectionMeans achieved = means_over_hours(realized, hours);
        summary["achieved_means"] = json{{"price", achieved.price},
                                         {"intensity", achieved.intensity},
                                         {"hours", achieved.n}};
    } catch (const Error&) {
        summary["achieved_means"] = nullptr;  // actuals do not cover the window yet
    }

    sink.write("schedule.json", summary.dump(2) + "\n");
    write_manifest(sink, cfg, "schedule", summary);
    std::cout << "scheduled " << hours.size() << " of " << plan.horizon << " hour(s) into "
              << sink.dir().string() << "\n";
    return 0;
}

int cmd_evaluate(const RunConfig& cfg)
{
    const Window w = run_window(cfg);
    const AreaConfig& area = cfg.main_area();
    ReportSink sink(cfg.out_dir);
    const int offset = cfg.market_utc_offset_hours;

    const HourlySeries price = load_repaired(cfg, area, Quantity::price);
    const HourlySeries intensity = load_repaired(cfg, area, Quantity::co2_intensity);
    const PairedSeries points = pair_series(slice_series(price, w.utc_start, w.hours),
                                            slice_series(intensity, w.utc_start, w.hours));

    const Strategy strategies[] = {Strategy::daily, Strategy::monthly, Strategy::yearly};
    const CaseKind kinds[] = {CaseKind::best, CaseKind::compromised, CaseKind::tradeoff};
    const Parameter params[] = {Parameter::price, Parameter::intensity};

    // pooled means per flh for every strategy / case / parameter
    std::vector<FlhCurvePoint> curve;
    for (Strategy s : strategies)
        for (CaseKind k : kinds)
            for (Parameter p : params) {
                const auto part = flh_curve(points, s, k, p, cfg.flh_grid, cfg.theta_deg, offset);
                curve.insert(curve.end(), part.begin(), part.end());
            }
    sink.write("flh_curve.csv", report::flh_curve_csv(curve));

    // the same pooled means rearranged into improvement rows
    auto curve_value = [&](int flh, Strategy s, CaseKind k, Parameter p) {
        for (const auto& row : curve)
            if (row.flh == flh && row.strategy == s && row.kind == k && row.parameter == p)
                return row.mean_value;
        throw StateError("flh curve row missing");
    };
    std::vector<ImprovementRow> improvements;
    for (int flh : cfg.flh_grid)
        for (Strategy s : strategies)
            for (Parameter p : params) {
                ImprovementRow row;
                row.area = area.code;
                row.flh = flh;
                row.strategy = s;
                row.parameter = p;
                row.best = curve_value(flh, s, CaseKind::best, p);
                row.compromised = curve_value(flh, s, CaseKind::compromised, p);
                row.tradeoff = curve_value(flh, s, CaseKind::tradeoff, p);
                row.improvement = improvement_pct(row.best, row.compromised, row.tradeoff);
                improvements.push_back(row);
            }
    sink.write("improvement.csv", report::improvement_csv(improvements));

    // selection means as the weighting angle sweeps from intensity to price
    std::vector<std::pair<Strategy, AnglePoint>> sweep;
    for (Strategy s : strategies)
        for (const AnglePoint& p : angle_sweep(points, cfg.flh_year, s, cfg.angle_grid, offset))
            sweep.emplace_back(s, p);
    sink.write("angle_sweep.csv", report::angle_sweep_csv(sweep));

    json summary;
    const MidpointDeltas mid = strategy_midpoint_deltas(points, cfg.flh_year, 45.0, offset);
    summary["midpoint_deltas"] = json{{"theta_deg", mid.theta_deg},
                                      {"monthly_price_drop_pct", mid.monthly_price_drop_pct},
                                      {"yearly_price_drop_pct", mid.yearly_price_drop_pct},
                                      {"monthly_intensity_drop_pct", mid.monthly_intensity_drop_pct},
                                      {"yearly_intensity_drop_pct", mid.yearly_intensity_drop_pct}};

    const RatioStudy price_ratio =
        random_baseline_ratio(points, Parameter::price, 90.0, cfg.durations);
    const RatioStudy intensity_ratio =
        random_baseline_ratio(points, Parameter::intensity, 0.0, cfg.durations);
    sink.write("ratio_price.csv", report::ratio_csv(price_ratio));
    sink.write("ratio_intensity.csv", report::ratio_csv(intensity_ratio));
    summary["ratio_days_used"] = price_ratio.days_used;
    summary["ratio_days_dropped"] = price_ratio.days_dropped;

    // cross-area study: correlation of the two signals vs achievable improvement
    std::vector<std::pair<std::string, PairedSeries>> study_input;
    std::vector<std::string> unusable;
    for (const auto& a : cfg.areas) {
        if (a.price_path.empty() || a.intensity_path.empty()) continue;
        try {
            const HourlySeries ap = load_repaired(cfg, a, Quantity::price);
            const HourlySeries ai = load_repaired(cfg, a, Quantity::co2_intensity);
            study_input.emplace_back(a.code,
                                     pair_series(slice_series(ap, w.utc_start, w.hours),
                                                 slice_series(ai, w.utc_start, w.hours)));
        } catch (const Error&) {
            unusable.push_back(a.code);
        }
    }
    try {
        const CorrelationStudy study =
            correlation_improvement_study(study_input, cfg.flh_year, cfg.theta_deg, offset);
        sink.write("area_study.csv", report::area_study_csv(study));
        json skipped = json::array();
        for (const auto& name : unusable) skipped.push_back(name);
        for (const auto& name : study.skipped) skipped.push_back(name);
        summary["area_study"] = json{{"fit", fit_json(study.fit)},
                                     {"areas", study.rows.size()},
                                     {"skipped", skipped}};
    } catch (const LengthError& e) {
        summary["area_study"] = json{{"skipped_reason", e.what()}};
    }

    // alignment of a generation profile against an in-hindsight plan
    if (!area.generation_path.empty()) {
        try {
            ScheduleTarget target;
            target.flh_year = cfg.flh_year;
            target.strategy = cfg.strategy;
            target.theta_deg = cfg.theta_deg;
            const ReferenceConfig ref =
                resolve_reference("period_itself", cfg.strategy, cfg.raw_units);
            const SchedulePlan plan = schedule(target, points, points, ref, offset);
            const HourlySeries generation = load_repaired(cfg, area, Quantity::generation);
            const AlignmentResult alignment = generation_alignment(generation, plan);
            sink.write("alignment.csv", report::alignment_csv(alignment, plan.start));
            summary["generation_alignment"] =
                json{{"correlation", alignment.correlation}, {"days", alignment.days}};
        } catch (const DegenerateError& e) {
            summary["generation_alignment"] = json{{"skipped_reason", e.what()}};
        }
    }

    sink.write("evaluate_summary.json", summary.dump(2) + "\n");
    write_manifest(sink, cfg, "evaluate", summary);
    std::cout << "evaluated " << cfg.flh_grid.size() << " quota(s) x 3 strategies into "
              << sink.dir().string() << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg)
{
    const Window w = run_window(cfg);
    const AreaConfig& area = cfg.main_area();
    ReportSink sink(cfg.out_dir);
    const int offset = cfg.market_utc_offset_hours;

    const HourlySeries price = load_repaired(cfg, area, Quantity::price);
    const HourlySeries intensity = load_repaired(cfg, area, Quantity::co2_intensity);
    const PairedSeries points = pair_series(slice_series(price, w.utc_start, w.hours),
                                            slice_series(intensity, w.utc_start, w.hours));

    std::vector<std::pair<Strategy, AnglePoint>> sweep;
    for (Strategy s : {Strategy::daily, Strategy::monthly, Strategy::yearly})
        for (const AnglePoint& p : angle_sweep(points, cfg.flh_year, s, cfg.angle_grid, offset))
            sweep.emplace_back(s, p);
    sink.write("sweep.csv", report::angle_sweep_csv(sweep));

    const MidpointDeltas mid = strategy_midpoint_deltas(points, cfg.flh_year, 45.0, offset);
    const json summary = json{{"flh_year", cfg.flh_year},
                              {"angles", cfg.angle_grid.size()},
                              {"midpoint_deltas",
                               json{{"theta_deg", mid.theta_deg},
                                    {"monthly_price_drop_pct", mid.monthly_price_drop_pct},
                                    {"yearly_price_drop_pct", mid.yearly_price_drop_pct},
                                    {"monthly_intensity_drop_pct", mid.monthly_intensity_drop_pct},
                                    {"yearly_intensity_drop_pct", mid.yearly_intensity_drop_pct}}}};
    sink.write("sweep.json", summary.dump(2) + "\n");
    write_manifest(sink, cfg, "sweep", summary);
    std::cout << "swept " << cfg.angle_grid.size() << " angle(s) into " << sink.dir().string()
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"day-ahead scheduling toolkit: trade off price against carbon intensity"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    bool use_actuals = false;
    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_override, "output directory (overrides out.dir)");
    auto* seed_opt = app.add_option("--seed", seed_override, "RNG seed (overrides forecast.seed)");
    app.add_flag("--use-actuals", use_actuals,
                 "schedule on observed series instead of forecasts");

    auto* ingest = app.add_subcommand("ingest", "normalize input files onto the hourly grid");
    auto* forecast = app.add_subcommand("forecast", "run the rolling day-ahead forecaster");
    auto* schedule = app.add_subcommand("schedule", "pick running hours for the configured target");
    auto* evaluate = app.add_subcommand("evaluate", "hindsight study over the run window");
    auto* sweep = app.add_subcommand("sweep", "selection means across weighting angles");
    for (auto* sub : {ingest, forecast, schedule, evaluate, sweep}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        auto upsert = [&cfg](const std::string& key, const std::string& value) {
            for (auto& [k, v] : cfg.raw)
                if (k == key) {
                    v = value;
                    return;
                }
            cfg.raw.emplace_back(key, value);
        };
        if (!out_override.empty()) {
            cfg.out_dir = out_override;
            upsert("out.dir", out_override);
        }
        if (seed_opt->count() > 0) {
            cfg.seed = seed_override;
            upsert("forecast.seed", std::to_string(seed_override));
        }

        if (app.got_subcommand(ingest)) return cmd_ingest(cfg);
        if (app.got_subcommand(forecast)) return cmd_forecast(cfg);
        if (app.got_subcommand(schedule)) return cmd_schedule(cfg, use_actuals);
        if (app.got_subcommand(evaluate)) return cmd_evaluate(cfg);
        if (app.got_subcommand(sweep)) return cmd_sweep(cfg);
        throw ConfigError("no command given");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
