#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ptx/normalize.hpp"
#include "ptx/tradeoff.hpp"

using namespace ptx;

namespace {

// Eight hours with a wide price/intensity spread and an anti-correlated shape.
std::vector<HourPoint> fixture_a()
{
    return {
        {0, 42.0, 180.0}, {1, 31.0, 240.0}, {2, 55.0, 120.0}, {3, 28.0, 300.0},
        {4, 47.0, 150.0}, {5, 36.0, 210.0}, {6, 39.0, 195.0}, {7, 60.0, 100.0},
    };
}

// Twelve reference hours used to calibrate a line at theta = 45.
std::vector<HourPoint> fixture_b()
{
    return {
        {0, 34.0, 150.0},  {1, 52.0, 310.0}, {2, 18.0, 420.0}, {3, 61.0, 95.0},
        {4, 45.0, 205.0},  {5, 29.0, 260.0}, {6, 73.0, 80.0},  {7, 38.0, 175.0},
        {8, 57.0, 230.0},  {9, 24.0, 390.0}, {10, 66.0, 130.0}, {11, 41.0, 285.0},
    };
}

// Brute-force best-k subset by total score, ties resolved by the sorted
// (score, price, index) key sequence. Independent of the selection code path.
std::vector<std::size_t> exhaustive_k_lowest(const std::vector<HourPoint>& pts,
                                             double theta, std::size_t k,
                                             const NormalizationFrame& frame)
{
    std::vector<double> score(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        score[i] = tradeoff_score(pts[i], frame, theta);

    using Key = std::tuple<double, double, std::size_t>;
    double best_total = 0.0;
    std::vector<Key> best_keys;
    std::vector<std::size_t> best;

    std::vector<std::size_t> combo(k);
    auto consider = [&]() {
        double total = 0.0;
        std::vector<Key> keys;
        for (std::size_t pos : combo) {
            total += score[pos];
            keys.emplace_back(score[pos], pts[pos].price, pts[pos].index);
        }
        std::sort(keys.begin(), keys.end());
        if (best.empty() || total < best_total
            || (total == best_total && keys < best_keys)) {
            best_total = total;
            best_keys = keys;
            best = combo;
        }
    };
    // iterative combination walk
    for (std::size_t i = 0; i < k; ++i) combo[i] = i;
    while (true) {
        consider();
        std::size_t i = k;
        while (i > 0 && combo[i - 1] == pts.size() - k + (i - 1)) --i;
        if (i == 0) break;
        ++combo[i - 1];
        for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
    std::sort(best.begin(), best.end());
    return best;
}

} // namespace

TEST_CASE("score collapses to a single axis at the boundary angles")
{
    CHECK(tradeoff_score(0.3, 0.9, 90.0) == 0.3);
    CHECK(tradeoff_score(0.3, 0.9, 0.0) == 0.9);
    CHECK(tradeoff_score(1.0, 0.0, 45.0) == Catch::Approx(0.7071067811865476).margin(1e-15));
    CHECK(tradeoff_score(0.0, 1.0, 45.0) == Catch::Approx(0.7071067811865476).margin(1e-15));
    CHECK_THROWS_AS(tradeoff_score(0.5, 0.5, -1.0), ConfigError);
    CHECK_THROWS_AS(tradeoff_score(0.5, 0.5, 90.5), ConfigError);
}

TEST_CASE("k lowest selection matches frozen rankings")
{
    const auto pts = fixture_a();
    const auto frame = frame_from_points(pts);
    CHECK(frame.price_min == 28.0);
    CHECK(frame.price_max == 60.0);
    CHECK(frame.intensity_min == 100.0);
    CHECK(frame.intensity_max == 300.0);

    CHECK(select_k_lowest(pts, 45.0, 3, frame) == std::vector<std::size_t>{1, 5, 6});
    CHECK(select_k_lowest(pts, 45.0, 5, frame) == std::vector<std::size_t>{0, 1, 4, 5, 6});
    CHECK(select_k_lowest(pts, 0.0, 3, frame) == std::vector<std::size_t>{2, 4, 7});
    CHECK(select_k_lowest(pts, 90.0, 3, frame) == std::vector<std::size_t>{1, 3, 5});

    CHECK(select_k_lowest(pts, 45.0, 0, frame).empty());
    const auto all = select_k_lowest(pts, 45.0, 8, frame);
    CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
    CHECK_THROWS_AS(select_k_lowest(pts, 45.0, 9, frame), CapacityError);
}

TEST_CASE("selection agrees with exhaustive subset search")
{
    const auto pts = fixture_a();
    const auto frame = frame_from_points(pts);
    for (double theta : {0.0, 22.5, 45.0, 67.5, 90.0})
        for (std::size_t k : {1u, 2u, 3u, 5u, 7u}) {
            CAPTURE(theta, k);
            CHECK(select_k_lowest(pts, theta, k, frame)
                  == exhaustive_k_lowest(pts, theta, k, frame));
        }
}

TEST_CASE("exact ties fall back to lower price, then earlier hour")
{
    // Equal intensity means equal score at theta = 0; price must decide.
    std::vector<HourPoint> pts{{0, 50.0, 200.0}, {1, 30.0, 200.0}, {2, 40.0, 100.0}};
    const auto frame = frame_from_points(pts);
    CHECK(select_k_lowest(pts, 0.0, 2, frame) == std::vector<std::size_t>{1, 2});

    // Identical points: the earlier hour index wins.
    std::vector<HourPoint> dup{{3, 30.0, 200.0}, {9, 30.0, 200.0}, {5, 30.0, 200.0}};
    NormalizationFrame id = NormalizationFrame::identity();
    CHECK(select_k_lowest(dup, 45.0, 1, id) == std::vector<std::size_t>{0});
    CHECK(select_k_lowest(dup, 45.0, 2, id) == std::vector<std::size_t>{0, 2});
}

TEST_CASE("selection is invariant under affine rescaling of both inputs")
{
    const auto pts = fixture_a();
    const auto frame = frame_from_points(pts);

    // Power-of-two scale factors keep the normalized coordinates bit-exact.
    std::vector<HourPoint> scaled;
    for (const auto& p : pts)
        scaled.push_back({p.index, 2.0 * p.price + 100.0, 0.5 * p.intensity - 50.0});
    const auto scaled_frame = frame_from_points(scaled);

    for (double theta : {0.0, 30.0, 45.0, 60.0, 90.0})
        for (std::size_t k = 1; k <= pts.size(); ++k) {
            CAPTURE(theta, k);
            CHECK(select_k_lowest(pts, theta, k, frame)
                  == select_k_lowest(scaled, theta, k, scaled_frame));
        }
}

TEST_CASE("steeper angles never raise the selected price mass")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> price(-30.0, 120.0);
    std::uniform_real_distribution<double> co2(20.0, 600.0);
    std::vector<HourPoint> pts;
    for (std::size_t i = 0; i < 200; ++i) pts.push_back({i, price(rng), co2(rng)});
    const auto frame = frame_from_points(pts);

    const std::size_t k = 60;
    double prev_x = 0.0, prev_y = 0.0;
    bool first = true;
    for (int deg = 0; deg <= 90; deg += 5) {
        double sum_x = 0.0, sum_y = 0.0;
        for (std::size_t pos : select_k_lowest(pts, double(deg), k, frame)) {
            const auto n = normalize_point(pts[pos], frame);
            sum_x += n.x;
            sum_y += n.y;
        }
        if (!first) {
            CHECK(sum_x <= prev_x + 1e-9);
            CHECK(sum_y >= prev_y - 1e-9);
        }
        prev_x = sum_x;
        prev_y = sum_y;
        first = false;
    }
}

TEST_CASE("line calibration picks the k_ref-th smallest reference score")
{
    const auto ref = fixture_b();
    const auto frame = frame_from_points(ref);
    CHECK(frame.price_min == 18.0);
    CHECK(frame.price_max == 73.0);
    CHECK(frame.intensity_min == 80.0);
    CHECK(frame.intensity_max == 420.0);

    const auto line = calibrate_line(ref, 45.0, 5, frame);
    CHECK(line.theta_deg == 45.0);
    CHECK(line.c == Catch::Approx(0.6070908755053487).margin(1e-12));

    // The line is inclusive, so sweeping it back over its own reference
    // returns exactly the k_ref calibrating hours (scores are distinct here).
    CHECK(select_below_line(ref, line, frame) == std::vector<std::size_t>{0, 3, 4, 5, 7});

    const auto lo = calibrate_line(ref, 45.0, 1, frame);
    CHECK(select_below_line(ref, lo, frame) == std::vector<std::size_t>{0});
    const auto hi = calibrate_line(ref, 45.0, 12, frame);
    CHECK(select_below_line(ref, hi, frame).size() == 12);

    CHECK_THROWS_AS(calibrate_line(ref, 45.0, 0, frame), CapacityError);
    CHECK_THROWS_AS(calibrate_line(ref, 45.0, 13, frame), CapacityError);
    CHECK_THROWS_AS(calibrate_line(std::vector<HourPoint>{}, 45.0, 1, frame), CapacityError);
}

TEST_CASE("fresh candidates are filtered by a previously calibrated line")
{
    const auto ref = fixture_b();
    const auto frame = frame_from_points(ref);
    const auto line = calibrate_line(ref, 45.0, 5, frame);

    const std::vector<HourPoint> day{
        {100, 30.0, 240.0}, {101, 48.0, 160.0}, {102, 55.0, 330.0},
        {103, 21.0, 300.0}, {104, 70.0, 110.0}, {105, 36.0, 205.0},
    };
    CHECK(select_below_line(day, line, frame) == std::vector<std::size_t>{0, 1, 3, 5});
}

TEST_CASE("raw-units frame scores unnormalized coordinates directly")
{
    const auto pts = fixture_a();
    const auto id = NormalizationFrame::identity();
    // At 45 degrees in raw units the ranking follows price + intensity.
    CHECK(select_k_lowest(pts, 45.0, 3, id) == std::vector<std::size_t>{2, 4, 7});
    CHECK(tradeoff_score(pts[0], id, 90.0) == 42.0);
    CHECK(tradeoff_score(pts[0], id, 0.0) == 180.0);
}

TEST_CASE("degenerate frames are rejected before scoring")
{
    std::vector<HourPoint> pts{{0, 40.0, 200.0}, {1, 40.0, 210.0}};
    CHECK_THROWS_AS(frame_from_points(pts), FrameError);
    NormalizationFrame flat{40.0, 40.0, 100.0, 300.0};
    CHECK_THROWS_AS(select_k_lowest(pts, 45.0, 1, flat), FrameError);
    CHECK_THROWS_AS(select_below_line(pts, TradeoffLine{45.0, 0.5}, flat), FrameError);
}
