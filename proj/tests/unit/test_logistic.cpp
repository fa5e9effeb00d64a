#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "minabro/logistic.hpp"

using namespace minabro;

namespace {

Dataset toy_separable() {
    Dataset d;
    d.feature_names = {"a", "b"};
    const double pts[][3] = {{0.1, 0.2, -1}, {0.2, 0.1, -1}, {0.15, 0.3, -1}, {0.3, 0.2, -1},
                             {0.8, 0.9, 1},  {0.9, 0.7, 1},  {0.7, 0.85, 1}, {0.95, 0.95, 1}};
    for (const auto& p : pts) {
        d.values.push_back(p[0]);
        d.values.push_back(p[1]);
        d.labels.push_back(static_cast<int>(p[2]));
    }
    return d;
}

}  // namespace

TEST_CASE("logistic regression separates a toy set") {
    const Dataset d = toy_separable();
    const auto r = train_logistic(d);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const Instance x(r.model, std::vector<double>(d.row(i).begin(), d.row(i).end()));
        correct += (score(r.model, x) > 0.0) == (d.labels[i] == 1);
    }
    CHECK(correct == d.rows());
    CHECK(r.model.weights()[0] > 0.0);
    CHECK(r.model.domains()[0].lower == 0.0);
    CHECK(r.model.domains()[0].upper == 1.0);

    const auto again = train_logistic(d);
    CHECK(std::vector<double>(again.model.weights().begin(), again.model.weights().end()) ==
          std::vector<double>(r.model.weights().begin(), r.model.weights().end()));
}

TEST_CASE("zero iterations returns the zero model") {
    LogisticOptions opts;
    opts.max_iterations = 0;
    const auto r = train_logistic(toy_separable(), opts);
    CHECK(r.iterations == 0);
    CHECK_FALSE(r.converged);
    CHECK(r.model.bias() == 0.0);
    for (double w : r.model.weights()) CHECK(w == 0.0);
}

TEST_CASE("single-class data is refused") {
    Dataset d = toy_separable();
    for (auto& y : d.labels) y = 1;
    CHECK_THROWS_AS(train_logistic(d), std::invalid_argument);
}
