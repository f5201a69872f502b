#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ptx/evaluation.hpp"

using namespace ptx;

namespace {

PairedSeries make_pairs(HourStamp start, const std::vector<std::pair<double, double>>& rows)
{
    PairedSeries ps;
    ps.area = "TT-1";
    ps.start = start;
    ps.span = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i)
        ps.points.push_back({i, rows[i].first, rows[i].second});
    return ps;
}

PairedSeries random_pairs(HourStamp start, std::size_t hours, std::uint32_t seed,
                          double price_lo = 20.0, double price_hi = 90.0,
                          double co2_lo = 100.0, double co2_hi = 500.0)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> price(price_lo, price_hi);
    std::uniform_real_distribution<double> co2(co2_lo, co2_hi);
    std::vector<std::pair<double, double>> rows(hours);
    for (auto& r : rows) r = {price(rng), co2(rng)};
    return make_pairs(start, rows);
}

double mean_price(const PairedSeries& ps)
{
    double s = 0.0;
    for (const auto& p : ps.points) s += p.price;
    return s / double(ps.points.size());
}

double mean_intensity(const PairedSeries& ps)
{
    double s = 0.0;
    for (const auto& p : ps.points) s += p.intensity;
    return s / double(ps.points.size());
}

} // namespace

TEST_CASE("case means split into best, compromised and trade-off")
{
    const auto year = random_pairs(make_hour(2018, 1, 1, 0), 40 * 24, 17);
    const auto frame = frame_from_points(year.points);
    const std::size_t k = 200;
    const auto m = case_means(year.points, k, 45.0, frame);
    CHECK(m.k == k);

    // independent check: sort hour order by raw price, take the k cheapest
    std::vector<std::size_t> order(year.points.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return year.points[a].price != year.points[b].price
                   ? year.points[a].price < year.points[b].price
                   : a < b;
    });
    order.resize(k);
    std::sort(order.begin(), order.end());
    double sum_p = 0.0, sum_i = 0.0;
    for (std::size_t pos : order) {
        sum_p += year.points[pos].price;
        sum_i += year.points[pos].intensity;
    }
    CHECK(m.best_price == sum_p / double(k));
    CHECK(m.compromised_intensity == sum_i / double(k));

    // ordering invariants: an optimum never loses to any other selection
    CHECK(m.best_price <= m.tradeoff_price);
    CHECK(m.best_price <= m.compromised_price);
    CHECK(m.best_intensity <= m.tradeoff_intensity);
    CHECK(m.best_intensity <= m.compromised_intensity);
    CHECK(m.best_price <= mean_price(year));
    CHECK(m.best_intensity <= mean_intensity(year));

    CHECK_THROWS_AS(case_means(year.points, year.points.size() + 1, 45.0, frame),
                    CapacityError);
}

TEST_CASE("selecting every hour collapses all six means to the series means")
{
    const auto year = random_pairs(make_hour(2018, 1, 1, 0), 10 * 24, 18);
    const auto frame = frame_from_points(year.points);
    const auto m = case_means(year.points, year.points.size(), 45.0, frame);
    const double mp = mean_price(year);
    const double mi = mean_intensity(year);
    CHECK(m.best_price == mp);
    CHECK(m.compromised_price == mp);
    CHECK(m.tradeoff_price == mp);
    CHECK(m.best_intensity == mi);
    CHECK(m.compromised_intensity == mi);
    CHECK(m.tradeoff_intensity == mi);
}

TEST_CASE("improvement percentage follows the compromised-to-tradeoff formula")
{
    CHECK(improvement_pct(236, 328, 245) == Catch::Approx(25.3048780487).margin(1e-6));
    CHECK(improvement_pct(28, 65, 32) == Catch::Approx(50.7692307692).margin(1e-6));
    CHECK(improvement_pct(10, 50, 50) == 0.0);
    CHECK(improvement_pct(10, 40, 50) < 0.0);  // trade-off can lose
    CHECK_THROWS_AS(improvement_pct(10, 0.0, 5), DegenerateError);

    // swapping the two operands flips the sign of the numerator
    const double a = improvement_pct(0, 40, 30);
    const double b = improvement_pct(0, 30, 40);
    CHECK(a > 0.0);
    CHECK(b < 0.0);
}

TEST_CASE("improvement rows pick the requested parameter out of the case means")
{
    CaseMeans m;
    m.best_price = 33.0;
    m.compromised_price = 44.0;
    m.tradeoff_price = 34.0;
    m.best_intensity = 236.0;
    m.compromised_intensity = 328.0;
    m.tradeoff_intensity = 245.0;

    const auto pr = make_improvement_row("DK-2", 4000, Strategy::yearly, Parameter::price, m);
    CHECK(pr.best == 33.0);
    CHECK(pr.compromised == 44.0);
    CHECK(pr.tradeoff == 34.0);
    CHECK(pr.improvement == Catch::Approx(100.0 * 10.0 / 44.0).margin(1e-12));

    const auto ir =
        make_improvement_row("DK-2", 4000, Strategy::yearly, Parameter::intensity, m);
    CHECK(ir.best == 236.0);
    CHECK(ir.improvement == Catch::Approx(25.3048780487).margin(1e-6));
}

TEST_CASE("a saturated budget reproduces the full-series mean on every strategy")
{
    const auto year = random_pairs(make_hour(2018, 1, 1, 0), 8760, 19);
    const std::vector<int> grid{8760};
    for (Strategy s : {Strategy::daily, Strategy::monthly, Strategy::yearly})
        for (CaseKind c : {CaseKind::best, CaseKind::compromised, CaseKind::tradeoff}) {
            CAPTURE(strategy_name(s), case_kind_name(c));
            const auto curve = flh_curve(year, s, c, Parameter::price, grid, 45.0);
            REQUIRE(curve.size() == 1);
            CHECK(curve[0].mean_value == mean_price(year));
            CHECK(curve[0].hours == 8760);
        }
}

TEST_CASE("best-case curves rise with the budget and with finer quotas")
{
    const auto year = random_pairs(make_hour(2018, 1, 1, 0), 8760, 20);
    const std::vector<int> grid{2000, 3000, 4000, 5000, 6000, 7000, 8000};

    for (Strategy s : {Strategy::daily, Strategy::monthly, Strategy::yearly}) {
        const auto curve = flh_curve(year, s, CaseKind::best, Parameter::price, grid, 45.0);
        for (std::size_t i = 1; i < curve.size(); ++i) {
            CAPTURE(strategy_name(s), curve[i].flh);
            CHECK(curve[i].mean_value >= curve[i - 1].mean_value - 1e-9);
        }
    }

    // freedom ordering at one budget: the wider the pool, the lower the mean
    const std::vector<int> one{6000};
    const double daily =
        flh_curve(year, Strategy::daily, CaseKind::best, Parameter::price, one, 45.0)[0]
            .mean_value;
    const double monthly =
        flh_curve(year, Strategy::monthly, CaseKind::best, Parameter::price, one, 45.0)[0]
            .mean_value;
    const double yearly =
        flh_curve(year, Strategy::yearly, CaseKind::best, Parameter::price, one, 45.0)[0]
            .mean_value;
    CHECK(yearly <= monthly + 1e-9);
    CHECK(monthly <= daily + 1e-9);
}

TEST_CASE("curves pool exactly the budgeted number of hours")
{
    const auto year = random_pairs(make_hour(2018, 1, 1, 0), 8760, 22);
    const std::vector<int> grid{4000, 5000, 6000, 7000};
    for (Strategy s : {Strategy::daily, Strategy::monthly, Strategy::yearly}) {
        const auto curve = flh_curve(year, s, CaseKind::tradeoff, Parameter::intensity, grid,
                                     45.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CAPTURE(strategy_name(s), grid[i]);
            CHECK(curve[i].hours == static_cast<std::size_t>(grid[i]));
        }
    }
}

TEST_CASE("a day with too few hours for its quota raises a capacity error")
{
    auto year = random_pairs(make_hour(2018, 1, 1, 0), 48, 23);
    year.points.erase(year.points.begin(), year.points.begin() + 14);  // 10 h left on day 0
    const std::vector<int> grid{6000};  // 16-17 hours per day
    CHECK_THROWS_AS(
        flh_curve(year, Strategy::daily, CaseKind::best, Parameter::price, grid, 45.0),
        CapacityError);
}

TEST_CASE("angle sweeps trade price against intensity monotonically")
{
    const auto year = random_pairs(make_hour(2018, 1, 1, 0), 90 * 24, 24);
    const std::vector<double> angles{0, 15, 30, 45, 60, 75, 90};

    for (Strategy s : {Strategy::daily, Strategy::yearly}) {
        const auto sweep = angle_sweep(year, 6000, s, angles);
        REQUIRE(sweep.size() == angles.size());
        for (std::size_t i = 1; i < sweep.size(); ++i) {
            CAPTURE(strategy_name(s), sweep[i].theta_deg);
            CHECK(sweep[i].mean_price <= sweep[i - 1].mean_price + 1e-9);
            CHECK(sweep[i].mean_intensity >= sweep[i - 1].mean_intensity - 1e-9);
        }
    }
}

TEST_CASE("the sweep endpoints coincide with the pure-case means")
{
    const auto year = random_pairs(make_hour(2018, 1, 1, 0), 8760, 25);
    const std::vector<double> angles{0, 90};
    const auto sweep = angle_sweep(year, 6000, Strategy::yearly, angles);

    const auto frame = frame_from_points(year.points);
    const auto m = case_means(year.points, 6000, 45.0, frame);
    CHECK(sweep[1].mean_price == m.best_price);
    CHECK(sweep[1].mean_intensity == m.compromised_intensity);
    CHECK(sweep[0].mean_intensity == m.best_intensity);
    CHECK(sweep[0].mean_price == m.compromised_price);
}

TEST_CASE("midpoint deltas compare strategies at one angle")
{
    const auto year = random_pairs(make_hour(2018, 1, 1, 0), 8760, 26);
    const auto d = strategy_midpoint_deltas(year, 6000, 45.0);

    const std::vector<double> mid{45.0};
    CHECK(d.daily_price == angle_sweep(year, 6000, Strategy::daily, mid)[0].mean_price);
    CHECK(d.yearly_intensity
          == angle_sweep(year, 6000, Strategy::yearly, mid)[0].mean_intensity);

    CHECK(d.monthly_price_drop_pct
          == Catch::Approx(100.0 * (d.daily_price - d.monthly_price) / d.daily_price)
                 .margin(1e-12));
    CHECK(d.yearly_intensity_drop_pct
          == Catch::Approx(100.0 * (d.daily_intensity - d.yearly_intensity)
                           / d.daily_intensity)
                 .margin(1e-12));
}

TEST_CASE("scheduled-to-random ratios match a hand-computed two-day fixture")
{
    // integer prices keep every mean exact regardless of summation order
    std::vector<std::pair<double, double>> rows;
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> price(10, 99);
    for (std::size_t i = 0; i < 48; ++i)
        rows.push_back({double(price(rng)), 100.0 + double(i)});
    const auto pts = make_pairs(make_hour(2018, 3, 1, 0), rows);

    const std::vector<int> durations{1, 2, 24};
    const auto study = random_baseline_ratio(pts, Parameter::price, 90.0, durations);
    CHECK(study.days_used == 2);
    CHECK(study.days_dropped == 0);
    REQUIRE(study.rows.size() == 3);

    for (std::size_t di = 0; di < 2; ++di) {
        const int d = durations[di];
        double sched = 0.0, rand = 0.0;
        for (std::size_t day = 0; day < 2; ++day) {
            std::vector<double> p;
            for (std::size_t h = 0; h < 24; ++h) p.push_back(rows[day * 24 + h].first);
            std::sort(p.begin(), p.end());
            double s = 0.0;
            for (int i = 0; i < d; ++i) s += p[static_cast<std::size_t>(i)];
            sched += s / double(d);
            rand += std::accumulate(p.begin(), p.end(), 0.0) / 24.0;
        }
        CAPTURE(d);
        CHECK(study.rows[di].scheduled_mean == sched / 2.0);
        CHECK(study.rows[di].random_mean == rand / 2.0);
        CHECK(study.rows[di].ratio == (sched / 2.0) / (rand / 2.0));
    }

    // full-day consumption leaves nothing to schedule
    CHECK(study.rows[2].ratio == 1.0);
}

TEST_CASE("ratio properties hold on random data")
{
    const auto pts = random_pairs(make_hour(2018, 3, 1, 0), 30 * 24, 33);
    const std::vector<int> durations{1, 6, 12, 24};

    const auto by_price = random_baseline_ratio(pts, Parameter::price, 90.0, durations);
    CHECK(by_price.rows[0].ratio < 1.0);
    CHECK(by_price.rows[3].ratio == 1.0);
    for (const auto& row : by_price.rows) CHECK(row.ratio <= 1.0 + 1e-12);

    const auto by_co2 = random_baseline_ratio(pts, Parameter::intensity, 0.0, durations);
    CHECK(by_co2.rows[0].ratio < 1.0);
    CHECK(by_co2.rows[3].ratio == 1.0);

    // a trade-off angle tracks both, staying between the extremes in spirit:
    // the ratio simply has to stay finite and positive here
    const auto mixed = random_baseline_ratio(pts, Parameter::price, 45.0, durations);
    for (const auto& row : mixed.rows) CHECK(row.ratio > 0.0);
}

TEST_CASE("incomplete days are dropped from the ratio study")
{
    auto pts = random_pairs(make_hour(2018, 3, 1, 0), 60, 34);  // 2.5 days
    const std::vector<int> durations{2};
    const auto study = random_baseline_ratio(pts, Parameter::price, 90.0, durations);
    CHECK(study.days_used == 2);
    CHECK(study.days_dropped == 1);

    // the partial day's values must not leak into the result
    auto poked = pts;
    for (std::size_t i = 48; i < 60; ++i) poked.points[i].price = 1e9;
    const auto again = random_baseline_ratio(poked, Parameter::price, 90.0, durations);
    CHECK(again.rows[0].scheduled_mean == study.rows[0].scheduled_mean);
    CHECK(again.rows[0].random_mean == study.rows[0].random_mean);

    CHECK_THROWS_AS(random_baseline_ratio(pts, Parameter::price, 90.0, std::vector<int>{0}),
                    ConfigError);
    CHECK_THROWS_AS(random_baseline_ratio(pts, Parameter::price, 90.0, std::vector<int>{25}),
                    ConfigError);
    auto tiny = random_pairs(make_hour(2018, 3, 1, 0), 10, 35);
    CHECK_THROWS_AS(random_baseline_ratio(tiny, Parameter::price, 90.0, durations),
                    EmptyInputError);
}

TEST_CASE("the study regression recovers an exact linear relation")
{
    std::vector<AreaStudyRow> rows{
        {"A", -0.8, -40.0 * -0.8 + 10.0},
        {"B", -0.3, -40.0 * -0.3 + 10.0},
        {"C", 0.2, -40.0 * 0.2 + 10.0},
        {"D", 0.6, -40.0 * 0.6 + 10.0},
    };
    const auto fit = study_fit(rows);
    CHECK(fit.slope == Catch::Approx(-40.0).margin(1e-9));
    CHECK(fit.intercept == Catch::Approx(10.0).margin(1e-9));
    CHECK(fit.r_squared == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("correlated areas benefit less from the trade-off")
{
    // intensity = rho * standardized price + residual noise, per area
    const HourStamp start = make_hour(2018, 1, 1, 0);
    std::vector<std::pair<std::string, PairedSeries>> areas;
    std::mt19937 rng(77);
    std::normal_distribution<double> noise(0.0, 1.0);
    const std::vector<double> rhos{-0.9, -0.5, 0.0, 0.5, 0.9};
    for (std::size_t a = 0; a < rhos.size(); ++a) {
        std::vector<std::pair<double, double>> rows;
        for (std::size_t i = 0; i < 90 * 24; ++i) {
            const double z = noise(rng);
            const double price = 50.0 + 15.0 * z;
            const double co2 = 300.0
                               + 100.0 * (rhos[a] * z
                                          + std::sqrt(1.0 - rhos[a] * rhos[a]) * noise(rng));
            rows.push_back({price, co2});
        }
        areas.emplace_back("SX-" + std::to_string(a + 1), make_pairs(start, rows));
    }

    const auto study = correlation_improvement_study(areas, 6000, 45.0);
    REQUIRE(study.rows.size() == 5);
    CHECK(study.skipped.empty());
    for (std::size_t a = 0; a < 5; ++a) {
        CHECK(study.rows[a].correlation >= -1.0);
        CHECK(study.rows[a].correlation <= 1.0);
        CHECK(study.rows[a].correlation == Catch::Approx(rhos[a]).margin(0.05));
    }
    CHECK(study.fit.slope < 0.0);
    CHECK(study.fit.n == 5);
}

TEST_CASE("unusable areas are skipped, and too few areas is an error")
{
    const HourStamp start = make_hour(2018, 1, 1, 0);
    std::vector<std::pair<std::string, PairedSeries>> areas;
    for (int a = 0; a < 3; ++a)
        areas.emplace_back("OK-" + std::to_string(a),
                           random_pairs(start, 30 * 24, 100 + std::uint32_t(a)));
    // constant intensity: no frame, no correlation; must be skipped by name
    std::vector<std::pair<double, double>> flat(30 * 24, {40.0, 250.0});
    for (std::size_t i = 0; i < flat.size(); ++i) flat[i].first = 40.0 + double(i % 7);
    areas.emplace_back("BAD-1", make_pairs(start, flat));

    const auto study = correlation_improvement_study(areas, 6000, 45.0);
    CHECK(study.rows.size() == 3);
    REQUIRE(study.skipped.size() == 1);
    CHECK(study.skipped[0] == "BAD-1");

    areas.resize(2);
    CHECK_THROWS_AS(correlation_improvement_study(areas, 6000, 45.0), LengthError);
}

TEST_CASE("generation alignment correlates busy days with supply")
{
    const HourStamp start = make_hour(2018, 6, 1, 0);
    const std::size_t days = 6;

    SchedulePlan plan;
    plan.strategy = Strategy::monthly;
    plan.start = start;
    plan.horizon = days * 24;
    const std::vector<std::size_t> counts{2, 4, 6, 8, 10, 12};
    for (std::size_t d = 0; d < days; ++d)
        for (std::size_t i = 0; i < counts[d]; ++i)
            plan.selected.push_back({d * 24 + i, 0.0, SelectionRule::below_line});

    HourlySeries gen;
    gen.area = "TT-1";
    gen.quantity = Quantity::generation;
    gen.unit = default_unit(Quantity::generation);
    gen.start = start;
    gen.values.assign(days * 24, 0.0);
    for (std::size_t d = 0; d < days; ++d)
        for (std::size_t h = 0; h < 24; ++h)
            gen.values[d * 24 + h] = 10.0 * double(counts[d]) + double(h % 3);

    const auto res = generation_alignment(gen, plan);
    CHECK(res.days == days);
    CHECK(res.daily_scheduled == std::vector<double>{2, 4, 6, 8, 10, 12});
    CHECK(res.correlation == Catch::Approx(1.0).margin(1e-12));

    // reversed counts anti-align
    SchedulePlan rev = plan;
    rev.selected.clear();
    for (std::size_t d = 0; d < days; ++d)
        for (std::size_t i = 0; i < counts[days - 1 - d]; ++i)
            rev.selected.push_back({d * 24 + i, 0.0, SelectionRule::below_line});
    CHECK(generation_alignment(gen, rev).correlation == Catch::Approx(-1.0).margin(1e-12));
}

TEST_CASE("alignment rejects constant plans and bad coverage")
{
    const HourStamp start = make_hour(2018, 6, 1, 0);
    SchedulePlan plan;
    plan.strategy = Strategy::daily;
    plan.start = start;
    plan.horizon = 96;
    for (std::size_t d = 0; d < 4; ++d)
        for (std::size_t i = 0; i < 5; ++i)
            plan.selected.push_back({d * 24 + i, 0.0, SelectionRule::below_line});

    HourlySeries gen;
    gen.area = "TT-1";
    gen.quantity = Quantity::generation;
    gen.unit = default_unit(Quantity::generation);
    gen.start = start;
    gen.values.assign(96, 1.0);
    for (std::size_t i = 0; i < 96; ++i) gen.values[i] = double(i % 31);

    CHECK_THROWS_WITH(generation_alignment(gen, plan),
                      Catch::Matchers::ContainsSubstring("not applicable for daily strategy"));

    SchedulePlan varied = plan;
    varied.selected.push_back({1 * 24 + 7, 0.0, SelectionRule::below_line});

    HourlySeries late = gen;
    late.start = start + 1;
    CHECK_THROWS_AS(generation_alignment(late, varied), RangeError);

    HourlySeries gappy = gen;
    gappy.values[50] = kMissing;
    CHECK_THROWS_AS(generation_alignment(gappy, varied), RangeError);

    HourlySeries wrong = gen;
    wrong.quantity = Quantity::price;
    CHECK_THROWS_AS(generation_alignment(wrong, varied), UnitError);

    SchedulePlan bad = varied;
    bad.horizon = 95;
    CHECK_THROWS_AS(generation_alignment(gen, bad), ConfigError);
}
