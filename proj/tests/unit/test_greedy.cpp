#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <random>

#include "minabro/greedy.hpp"
#include "minabro/oracle.hpp"
#include "support.hpp"
#include "timing.hpp"

using namespace minabro;
using minabro::testing::unit_box_classifier;

TEST_CASE("positive explanations") {
    SUBCASE("largest gain covers the margin") {
        const auto clf = unit_box_classifier({3, -2, 1}, 0, -1, 1);
        const Instance x(clf.model(), {1, 0, 1});
        const auto r = explain_positive(clf, x);
        CHECK(r.explanation.indices == std::vector<std::size_t>{0});
        CHECK(r.explanation.kind == ExplanationKind::Positive);
        CHECK(r.explanation.certified_minimum);
        CHECK(r.trace.prefix_length == 1);
        CHECK(r.trace.required_margin == 3.0);
        CHECK(r.trace.gains == std::vector<double>{3, 2, 1});
        CHECK(r.trace.ordered_indices == std::vector<std::size_t>{0, 1, 2});
    }
    SUBCASE("empty when the worst case is already positive") {
        const auto clf = unit_box_classifier({1, 1}, 2.0, -1, 1);
        const auto r = explain_positive(clf, Instance(clf.model(), {0.3, 0.6}));
        CHECK(r.explanation.size() == 0);
        CHECK(r.trace.prefix_length == 0);
        CHECK(r.trace.required_margin <= 0.0);
    }
    SUBCASE("tied gains, both needed") {
        const auto clf = unit_box_classifier({1, 1}, 0, 0, 1.5);
        const auto r = explain_positive(clf, Instance(clf.model(), {1, 1}));
        CHECK(r.explanation.indices == std::vector<std::size_t>{0, 1});
        CHECK(r.trace.required_margin == 1.5);
    }
    SUBCASE("wrong label") {
        const auto clf = unit_box_classifier({3, -2, 1}, 0, -1, 1);
        CHECK_THROWS_AS(explain_positive(clf, Instance(clf.model(), {0, 1, 0})), std::invalid_argument);
        CHECK_THROWS_AS(explain_negative(clf, Instance(clf.model(), {1, 0, 1})), std::invalid_argument);
    }
}

TEST_CASE("negative explanations") {
    SUBCASE("mirror of the positive example") {
        const auto clf = unit_box_classifier({-3, 2, -1}, 0, -1, 1);
        const Instance x(clf.model(), {1, 0, 1});
        const auto r = explain_negative(clf, x);
        CHECK(r.explanation.indices == std::vector<std::size_t>{0});
        CHECK(r.explanation.kind == ExplanationKind::Negative);
        CHECK(brute_force_minimum(clf, x).indices == std::vector<std::size_t>{0});
    }
    SUBCASE("empty when the best case is already negative") {
        const auto clf = unit_box_classifier({1, 1}, -5.0, -1, 1);
        CHECK(explain_negative(clf, Instance(clf.model(), {0.5, 0.5})).explanation.size() == 0);
    }
    SUBCASE("mirror of the tie example") {
        const auto clf = unit_box_classifier({-1, -1}, 0, -1.5, 0);
        const auto r = explain_negative(clf, Instance(clf.model(), {1, 1}));
        CHECK(r.explanation.indices == std::vector<std::size_t>{0, 1});
    }
}

TEST_CASE("greedy matches brute force and keeps its invariants") {
    CaseGenerator gen(2024);
    for (int i = 0; i < 400; ++i) {
        const Label want = i % 2 == 0 ? Label::Positive : Label::Negative;
        const RandomCase c = gen.next_with_label(want);
        const auto r = want == Label::Positive ? explain_positive(c.classifier, c.instance)
                                               : explain_negative(c.classifier, c.instance);
        const auto& e = r.explanation;
        REQUIRE(is_valid_explanation(c.classifier, c.instance, e.indices, e.kind));
        REQUIRE(e.size() == brute_force_minimum(c.classifier, c.instance).size());

        const auto& t = r.trace;
        REQUIRE(std::is_sorted(t.gains.begin(), t.gains.end(), std::greater<>()));
        const double target = t.required_margin - c.classifier.epsilon();
        double prefix = 0.0;
        for (std::size_t k = 0; k + 1 < t.prefix_length; ++k) prefix += t.gains[k];
        if (t.prefix_length >= 1) {
            REQUIRE(prefix < target);
            REQUIRE(prefix + t.gains[t.prefix_length - 1] >= target);

            // Dropping the last-selected feature breaks validity.
            std::vector<std::size_t> shorter(t.ordered_indices.begin(),
                                             t.ordered_indices.begin() + static_cast<long>(t.prefix_length) - 1);
            REQUIRE_FALSE(is_valid_explanation(c.classifier, c.instance, shorter, e.kind));
        }

        const auto again = want == Label::Positive ? explain_positive(c.classifier, c.instance)
                                                   : explain_negative(c.classifier, c.instance);
        REQUIRE(again.explanation.indices == e.indices);
    }
}

TEST_CASE("greedy runtime scales close to n log n") {
    minabro::testing::GreedyTimer timer;
    const auto t = timer.median_ns({10'000, 20'000}, 41, 99);
    const double t1 = t[0];
    const double t2 = t[1];
    MESSAGE("greedy median 1e4: " << t1 / 1e6 << " ms, 2e4: " << t2 / 1e6 << " ms");
    CHECK(t2 / t1 <= 2.5);
}
