#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <limits>
#include <random>

#include "minabro/calibration.hpp"

using namespace minabro;

namespace {

// Every ordered pair of candidates, scored through evaluate_risk.
double exhaustive_minimum(const std::vector<double>& scores, const std::vector<int>& labels, const RiskConfig& cfg) {
    const auto grid = candidate_thresholds(scores);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = a + 1; b < grid.size(); ++b) {
            best = std::min(best, evaluate_risk(scores, labels, grid[a], grid[b], cfg).empirical_risk);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("risk evaluation") {
    const RiskConfig cfg(0.24);
    const std::vector<double> s{-2, 0.5, 2};
    const std::vector<int> y{-1, -1, 1};

    const auto none = evaluate_risk(s, y, -3, -2.5, cfg);
    CHECK(none.rejection_ratio == 0.0);
    CHECK(none.error_ratio == doctest::Approx(2.0 / 3.0));

    const auto clean = evaluate_risk(s, y, 0.6, 0.7, cfg);
    CHECK(clean.error_ratio == 0.0);
    CHECK(clean.rejection_ratio == 0.0);
    CHECK(clean.empirical_risk == 0.0);

    const auto all = evaluate_risk(s, y, -5, 5, cfg);
    CHECK(all.error_ratio == 0.0);
    CHECK(all.rejection_ratio == 1.0);
    CHECK(all.empirical_risk == 0.24);

    const auto band = evaluate_risk(s, y, -1, 1, cfg);
    CHECK(band.rejection_ratio == doctest::Approx(1.0 / 3.0));
    CHECK(band.error_ratio == 0.0);
    CHECK(band.empirical_risk == doctest::Approx(0.24 / 3.0));

    CHECK_THROWS_AS(evaluate_risk(s, y, 1, 1, cfg), std::invalid_argument);
    CHECK_THROWS_AS(RiskConfig(0.0), std::invalid_argument);
    CHECK_THROWS_AS(RiskConfig(1.5), std::invalid_argument);
}

TEST_CASE("calibration examples") {
    SUBCASE("separable scores give a zero-risk band in the middle gap") {
        const std::vector<double> s{-2, -1, 1, 2};
        const std::vector<int> y{-1, -1, 1, 1};
        const auto r = calibrate_thresholds(s, y, RiskConfig(0.24));
        CHECK(r.empirical_risk == 0.0);
        CHECK(r.t_minus == doctest::Approx(-1.0 / 3.0));
        CHECK(r.t_plus == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("unit rejection cost never rejects separable data") {
        const std::vector<double> s{-3, -1.5, -0.2, 0.4, 1.1, 2.5};
        const std::vector<int> y{-1, -1, -1, 1, 1, 1};
        const auto r = calibrate_thresholds(s, y, RiskConfig(1.0));
        CHECK(r.rejection_ratio == 0.0);
        CHECK(r.empirical_risk == 0.0);
    }
    SUBCASE("identical scores: reject all or accept all") {
        const std::vector<double> s{0.3, 0.3, 0.3, 0.3};
        const std::vector<int> y{1, 1, 1, -1};
        const auto cheap = calibrate_thresholds(s, y, RiskConfig(0.2));
        CHECK(cheap.rejection_ratio == 1.0);
        CHECK(cheap.empirical_risk == doctest::Approx(0.2));
        const auto costly = calibrate_thresholds(s, y, RiskConfig(0.3));
        CHECK(costly.rejection_ratio == 0.0);
        CHECK(costly.empirical_risk == doctest::Approx(0.25));
    }
    SUBCASE("degenerate input") {
        const std::vector<double> s{1, 2, 3};
        CHECK_THROWS_AS(calibrate_thresholds(s, std::vector<int>{1, 1, 1}, RiskConfig(0.24)), std::invalid_argument);
        CHECK_THROWS_AS(calibrate_thresholds(std::vector<double>{1}, std::vector<int>{1}, RiskConfig(0.24)),
                        std::invalid_argument);
    }
}

TEST_CASE("calibration equals the exhaustive minimum and is monotone in the cost") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_int_distribution<int> size(2, 80);
    for (int t = 0; t < 40; ++t) {
        const int m = size(rng);
        std::vector<double> s(m);
        std::vector<int> y(m);
        for (int i = 0; i < m; ++i) {
            y[i] = i % 2 == 0 ? 1 : -1;
            s[i] = std::round((0.8 * y[i] + noise(rng)) * 20.0) / 20.0;  // repeats on purpose
        }
        double previous_rejection = 2.0;
        for (double wr : {0.05, 0.1, 0.24, 0.4, 0.6, 1.0}) {
            const RiskConfig cfg(wr);
            const auto r = calibrate_thresholds(s, y, cfg);
            REQUIRE(r.t_minus < r.t_plus);
            REQUIRE(std::abs(r.empirical_risk - exhaustive_minimum(s, y, cfg)) <= 1e-12);
            REQUIRE(std::abs(r.empirical_risk - (r.error_ratio + wr * r.rejection_ratio)) <= 1e-12);
            const auto check = evaluate_risk(s, y, r.t_minus, r.t_plus, cfg);
            REQUIRE(check.empirical_risk == r.empirical_risk);
            REQUIRE(r.rejection_ratio <= previous_rejection + 1e-12);
            previous_rejection = r.rejection_ratio;
        }
    }
}
