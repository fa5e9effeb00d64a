#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "minabro/baseline.hpp"
#include "minabro/explain.hpp"
#include "minabro/oracle.hpp"
#include "support.hpp"

using namespace minabro;
using minabro::testing::unit_box_classifier;

TEST_CASE("deletion baseline on the symmetric rejection example") {
    const auto clf = unit_box_classifier({2, -2}, 0, -1, 1);
    const Instance x(clf.model(), {0.5, 0.5});
    const auto e = subset_minimal_explanation(clf, x);
    // Dropping feature 0 leaves {1}: s_max = 1, s_min = -1, still inside the band.
    CHECK(e.indices == std::vector<std::size_t>{1});
    CHECK(e.kind == ExplanationKind::Rejection);
    CHECK_FALSE(e.certified_minimum);
    CHECK_FALSE(is_valid_explanation(clf, x, {}, ExplanationKind::Rejection));
}

TEST_CASE("deletion removes everything when nothing is needed") {
    const auto clf = unit_box_classifier({1, 1}, 5.0, -1, 1);
    CHECK(subset_minimal_explanation(clf, Instance(clf.model(), {0.2, 0.4})).size() == 0);
}

TEST_CASE("baseline is irredundant, valid and never smaller than the minimum") {
    CaseGenerator gen(31337, 2, 16);
    for (int i = 0; i < 600; ++i) {
        const RandomCase c = gen.next();
        const auto e = subset_minimal_explanation(c.classifier, c.instance);
        REQUIRE(e.kind == kind_for(predict(c.classifier, c.instance).label));
        REQUIRE(is_valid_explanation(c.classifier, c.instance, e.indices, e.kind));
        for (std::size_t k = 0; k < e.size(); ++k) {
            std::vector<std::size_t> fewer = e.indices;
            fewer.erase(fewer.begin() + static_cast<long>(k));
            REQUIRE_FALSE(is_valid_explanation(c.classifier, c.instance, fewer, e.kind));
        }
        REQUIRE(e.size() >= explain(c.classifier, c.instance).explanation.size());
    }
}
