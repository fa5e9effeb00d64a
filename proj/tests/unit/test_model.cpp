#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <random>

#include "minabro/model.hpp"
#include "support.hpp"

using namespace minabro;
using minabro::testing::all_indices;
using minabro::testing::enumerate_corners;
using minabro::testing::unit_box_classifier;
using minabro::testing::unit_box_model;

TEST_CASE("score is the affine dot product") {
    const auto m = unit_box_model({3, -2, 1});
    CHECK(score(m, Instance(m, {1, 0, 1})) == doctest::Approx(4.0));

    const auto zero = unit_box_model({0, 0, 0}, 0.7);
    CHECK(score(zero, Instance(zero, {0.2, 0.9, 0.4})) == 0.7);

    const auto m2 = unit_box_model({2, -2});
    CHECK(score(m2, Instance(m2, {0.5, 0.5})) == 0.0);
}

TEST_CASE("dimension mismatch and domain violations are rejected") {
    const auto m = unit_box_model({1, 1});
    CHECK_THROWS_AS(Instance(m, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(Instance(m, {0.5, 1.5}), std::invalid_argument);
    CHECK_THROWS_AS(LinearModel({1.0}, 0.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(LinearModel({1.0}, 0.0, {{1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(RejectClassifier(m, 1.0, 1.0), std::invalid_argument);

    const auto three = unit_box_model({1, 1, 1});
    const auto clf = RejectClassifier(m, -1, 1);
    CHECK_THROWS_AS(predict(clf, Instance(three, {0, 0, 0})), std::invalid_argument);
}

TEST_CASE("predict applies the band with closed rejection interval") {
    // Single weight 1, bias chosen so the score equals x - 1 on [0, 2].
    const LinearModel m({1.0}, -1.0, {{0.0, 2.0}});
    const RejectClassifier clf(m, -0.35, 0.01);
    CHECK(predict(clf, Instance(m, {1.5})).label == Label::Positive);
    CHECK(predict(clf, Instance(m, {0.9})).label == Label::Reject);
    CHECK(predict(clf, Instance(m, {0.5})).label == Label::Negative);

    CHECK(label_for_score(clf, 0.01) == Label::Reject);
    CHECK(label_for_score(clf, -0.35) == Label::Reject);
    CHECK(label_for_score(clf, 0.01 + 1e-6) == Label::Positive);
    CHECK(label_for_score(clf, -0.35 - 1e-6) == Label::Negative);
}

TEST_CASE("coefficient profile follows the sign rule") {
    const auto clf = unit_box_classifier({2, -2}, 0, -1, 1);
    const auto p = coefficient_profile(clf, Instance(clf.model(), {0.5, 0.5}));
    CHECK(p.alpha_max == std::vector<double>{2, 0});
    CHECK(p.alpha_min == std::vector<double>{0, -2});
    CHECK(p.beta == std::vector<double>{1, -1});
    CHECK(p.baseline_max == 2.0);
    CHECK(p.baseline_min == -2.0);

    const auto zero = unit_box_classifier({0, 0}, 0.3, -1, 1);
    const auto pz = coefficient_profile(zero, Instance(zero.model(), {0.1, 0.9}));
    CHECK(pz.alpha_max == std::vector<double>{0, 0});
    CHECK(pz.alpha_min == std::vector<double>{0, 0});
    CHECK(pz.beta == std::vector<double>{0, 0});
    CHECK(pz.baseline_max == 0.3);
    CHECK(pz.baseline_min == 0.3);

    const auto clf3 = unit_box_classifier({3, -2, 1}, 0, -1, 1);
    const auto p3 = coefficient_profile(clf3, Instance(clf3.model(), {1, 0, 1}));
    CHECK(p3.delta_plus == std::vector<double>{3, 2, 1});
}

TEST_CASE("closed-form extrema") {
    const auto clf = unit_box_classifier({2, -2}, 0, -1, 1);
    const Instance x(clf.model(), {0.5, 0.5});
    const auto p = coefficient_profile(clf, x);
    const std::vector<std::size_t> first{0};
    CHECK(s_max(p, first) == 1.0);
    CHECK(s_min(p, first) == -1.0);
    const auto corners = enumerate_corners(clf.model(), x.values(), first);
    CHECK(corners.highest == 1.0);
    CHECK(corners.lowest == -1.0);

    CHECK(s_max(p, {}) == p.baseline_max);
    CHECK(s_min(p, {}) == p.baseline_min);
    const auto all = all_indices(2);
    CHECK(s_max(p, all) == doctest::Approx(score(clf.model(), x)));
    CHECK(s_min(p, all) == doctest::Approx(score(clf.model(), x)));

    const std::vector<std::size_t> bad{5};
    CHECK_THROWS_AS(s_max(p, bad), std::out_of_range);
}

TEST_CASE("validity checks") {
    const auto rej = unit_box_classifier({2, -2}, 0, -1, 1);
    const Instance xr(rej.model(), {0.5, 0.5});
    const std::vector<std::size_t> first{0};
    CHECK(is_valid_explanation(rej, xr, first, ExplanationKind::Rejection));
    CHECK(touches_threshold(rej, xr, first, ExplanationKind::Rejection));
    CHECK_FALSE(is_valid_explanation(rej, xr, {}, ExplanationKind::Rejection));
    CHECK_THROWS_AS(is_valid_explanation(rej, xr, first, ExplanationKind::Positive), std::invalid_argument);

    const auto pos = unit_box_classifier({3, -2, 1}, 0, -1, 1);
    const Instance xp(pos.model(), {1, 0, 1});
    const std::vector<std::size_t> second{1};
    CHECK_FALSE(is_valid_explanation(pos, xp, second, ExplanationKind::Positive));
    CHECK(is_valid_explanation(pos, xp, first, ExplanationKind::Positive));
    CHECK(is_valid_explanation(pos, xp, all_indices(3), ExplanationKind::Positive));
}

TEST_CASE("explanation construction normalizes and validates") {
    const auto e = make_explanation({2, 0, 1}, ExplanationKind::Negative, true, 3);
    CHECK(e.indices == std::vector<std::size_t>{0, 1, 2});
    CHECK(e.size() == 3);
    CHECK_THROWS_AS(make_explanation({1, 1}, ExplanationKind::Negative, true, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_explanation({3}, ExplanationKind::Negative, true, 3), std::out_of_range);
}

TEST_CASE("extrema bracket the score and tighten monotonically") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0), wdist(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 9;
        std::vector<double> w(n), x(n), lo(n), hi(n);
        std::vector<FeatureDomain> dom(n);
        for (std::size_t j = 0; j < n; ++j) {
            w[j] = wdist(rng);
            const double a = wdist(rng) * 3, b = wdist(rng) * 3;
            dom[j] = {std::min(a, b), std::max(a, b)};
            x[j] = dom[j].lower + u(rng) * (dom[j].upper - dom[j].lower);
        }
        const LinearModel m(w, wdist(rng), dom);
        const Instance inst(m, x);
        const auto p = coefficient_profile(m, inst);
        const double s = score(m, inst);

        std::vector<std::size_t> small, large;
        for (std::size_t j = 0; j < n; ++j) {
            const double r = u(rng);
            if (r < 0.3) small.push_back(j);
            if (r < 0.7) large.push_back(j);
        }
        CHECK(s_max(p, large) <= s_max(p, small) + 1e-12);
        CHECK(s_min(p, large) >= s_min(p, small) - 1e-12);
        CHECK(s_min(p, small) <= s + 1e-12);
        CHECK(s_max(p, small) >= s - 1e-12);

        // Corners attain the extrema; random completions stay inside.
        const auto corners = enumerate_corners(m, x, small);
        CHECK(corners.highest == doctest::Approx(s_max(p, small)).epsilon(1e-12));
        CHECK(corners.lowest == doctest::Approx(s_min(p, small)).epsilon(1e-12));
        std::vector<char> fixed(n, 0);
        for (std::size_t j : small) fixed[j] = 1;
        for (int k = 0; k < 1000; ++k) {
            double sc = m.bias();
            for (std::size_t j = 0; j < n; ++j) {
                const double v = fixed[j] ? x[j] : dom[j].lower + u(rng) * (dom[j].upper - dom[j].lower);
                sc += w[j] * v;
            }
            REQUIRE(sc <= s_max(p, small) + kDefaultEpsilon);
            REQUIRE(sc >= s_min(p, small) - kDefaultEpsilon);
        }
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(p.alpha_min[j] <= p.beta[j]);
            CHECK(p.beta[j] <= p.alpha_max[j]);
            CHECK(p.delta_plus[j] >= 0.0);
            CHECK(p.delta_minus[j] >= 0.0);
        }
    }
}
