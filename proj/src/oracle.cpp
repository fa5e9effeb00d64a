#include "minabro/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "minabro/explain.hpp"

namespace minabro {

namespace {

struct Extrema {
    double lower;
    double upper;
};

// Direct evaluation from weights and domains; deliberately does not go
// through CoefficientProfile.
Extrema extrema_of(const LinearModel& model, std::span<const double> x, const std::vector<char>& is_fixed) {
    const auto w = model.weights();
    const auto dom = model.domains();
    Extrema e{model.bias(), model.bias()};
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (is_fixed[j]) {
            e.lower += w[j] * x[j];
            e.upper += w[j] * x[j];
        } else {
            const double a = w[j] * dom[j].lower;
            const double b = w[j] * dom[j].upper;
            e.lower += std::min(a, b);
            e.upper += std::max(a, b);
        }
    }
    return e;
}

bool forces(const RejectClassifier& clf, ExplanationKind kind, Extrema e) {
    const double eps = clf.epsilon();
    if (kind == ExplanationKind::Positive) return !(e.lower < clf.t_plus() - eps);
    if (kind == ExplanationKind::Negative) return !(e.upper > clf.t_minus() + eps);
    return !(e.upper > clf.t_plus() + eps) && !(e.lower < clf.t_minus() - eps);
}

bool agrees(const RejectClassifier& clf, ExplanationKind kind, double s) {
    if (kind_for(label_for_score(clf, s)) == kind) return true;
    const double slack = 2.0 * clf.epsilon();
    switch (kind) {
        case ExplanationKind::Positive: return s >= clf.t_plus() - slack;
        case ExplanationKind::Negative: return s <= clf.t_minus() + slack;
        case ExplanationKind::Rejection:
            return s >= clf.t_minus() - slack && s <= clf.t_plus() + slack;
    }
    return false;
}

double dot(const LinearModel& model, const std::vector<double>& x) {
    const auto w = model.weights();
    double s = model.bias();
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
    return s;
}

}  // namespace

Explanation brute_force_minimum(const RejectClassifier& clf, const Instance& instance) {
    const std::size_t n = clf.num_features();
    if (n > kOracleMaxFeatures) {
        throw std::invalid_argument("brute force refuses n = " + std::to_string(n) + " (limit " +
                                    std::to_string(kOracleMaxFeatures) + ")");
    }
    const ExplanationKind kind = kind_for(predict(clf, instance).label);
    const auto x = instance.values();

    std::vector<char> is_fixed(n, 0);
    for (std::size_t size = 0; size <= n; ++size) {
        std::vector<std::size_t> combo(size);
        std::iota(combo.begin(), combo.end(), std::size_t{0});
        while (true) {
            std::fill(is_fixed.begin(), is_fixed.end(), 0);
            for (std::size_t j : combo) is_fixed[j] = 1;
            if (forces(clf, kind, extrema_of(clf.model(), x, is_fixed))) {
                return make_explanation(combo, kind, true, n);
            }
            // Advance to the next combination in lexicographic order.
            std::size_t i = size;
            while (i > 0 && combo[i - 1] == n - size + i - 1) --i;
            if (i == 0) break;
            ++combo[i - 1];
            for (std::size_t k = i; k < size; ++k) combo[k] = combo[k - 1] + 1;
        }
    }
    throw std::logic_error("no subset forces the prediction, not even the full instance");
}

bool sampled_sufficiency_check(const RejectClassifier& clf, const Instance& instance,
                               std::span<const std::size_t> fixed, ExplanationKind kind,
                               std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("trials must be at least 1");
    const LinearModel& model = clf.model();
    const std::size_t n = model.num_features();
    const auto x = instance.values();
    const auto w = model.weights();
    const auto dom = model.domains();

    std::vector<char> is_fixed(n, 0);
    for (std::size_t j : fixed) {
        if (j >= n) throw std::out_of_range("fixed index out of range");
        is_fixed[j] = 1;
    }
    std::vector<std::size_t> free_features;
    for (std::size_t j = 0; j < n; ++j) {
        if (!is_fixed[j]) free_features.push_back(j);
    }

    std::vector<double> point(x.begin(), x.end());
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t j : free_features) {
            std::uniform_real_distribution<double> draw(dom[j].lower, dom[j].upper);
            point[j] = dom[j].lower == dom[j].upper ? dom[j].lower : draw(rng);
        }
        if (!agrees(clf, kind, dot(model, point))) return false;
    }

    // The two corners that attain the extreme scores.
    for (int direction : {+1, -1}) {
        for (std::size_t j : free_features) {
            const bool take_upper = (w[j] >= 0.0) == (direction > 0);
            point[j] = take_upper ? dom[j].upper : dom[j].lower;
        }
        if (!agrees(clf, kind, dot(model, point))) return false;
    }

    // Every corner, while that stays cheap.
    if (free_features.size() <= 12) {
        const std::uint64_t corners = std::uint64_t{1} << free_features.size();
        for (std::uint64_t mask = 0; mask < corners; ++mask) {
            for (std::size_t k = 0; k < free_features.size(); ++k) {
                const std::size_t j = free_features[k];
                point[j] = (mask >> k) & 1u ? dom[j].upper : dom[j].lower;
            }
            if (!agrees(clf, kind, dot(model, point))) return false;
        }
    }
    return true;
}

CaseGenerator::CaseGenerator(std::uint64_t seed, std::size_t min_features, std::size_t max_features)
    : rng_(seed), min_features_(min_features), max_features_(max_features) {
    if (min_features_ == 0 || min_features_ > max_features_) {
        throw std::invalid_argument("invalid feature-count range for case generator");
    }
}

RandomCase CaseGenerator::next() {
    std::uniform_int_distribution<std::size_t> pick_n(min_features_, max_features_);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> weight(-1.0, 1.0);
    std::uniform_real_distribution<double> bias(-0.5, 0.5);
    std::uniform_real_distribution<double> width(0.05, 1.0);

    const std::size_t n = pick_n(rng_);
    std::vector<double> w(n);
    std::vector<double> x(n);
    for (auto& v : w) v = weight(rng_);
    const double b = bias(rng_);
    for (auto& v : x) v = unit(rng_);
    const double band = width(rng_);
    const double t_minus = -band * unit(rng_);
    LinearModel model(std::move(w), b, std::vector<FeatureDomain>(n, FeatureDomain{0.0, 1.0}));
    Instance instance(model, std::move(x));
    return RandomCase{RejectClassifier(std::move(model), t_minus, t_minus + band), std::move(instance)};
}

RandomCase CaseGenerator::next_with_label(Label label) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        RandomCase c = next();
        if (predict(c.classifier, c.instance).label == label) return c;
    }
    throw std::runtime_error("case generator could not produce the requested label");
}

Explanation minabro_explainer(const RejectClassifier& clf, const Instance& instance) {
    return explain(clf, instance).explanation;
}

OracleSuiteSummary check_against_oracle(const std::vector<RandomCase>& cases, const Explainer& explainer) {
    OracleSuiteSummary summary;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const RandomCase& c = cases[i];
        const Label label = predict(c.classifier, c.instance).label;
        const bool rejected = label == Label::Reject;
        (rejected ? summary.rejected_total : summary.classified_total)++;

        const Explanation expected = brute_force_minimum(c.classifier, c.instance);
        const Explanation got = explainer(c.classifier, c.instance);
        const bool valid = got.kind == kind_for(label) &&
                           is_valid_explanation(c.classifier, c.instance, got.indices, got.kind);
        if (valid && got.certified_minimum && got.size() == expected.size()) {
            (rejected ? summary.rejected_agree : summary.classified_agree)++;
        } else {
            std::ostringstream msg;
            msg << "case " << i << " (" << to_string(label) << ", n=" << c.classifier.num_features()
                << "): size " << got.size() << " vs oracle " << expected.size()
                << (valid ? "" : ", invalid set") << (got.certified_minimum ? "" : ", uncertified");
            summary.mismatches.push_back(msg.str());
        }
    }
    return summary;
}

OracleSuiteSummary run_oracle_suite(const OracleSuiteConfig& config, const Explainer& explainer) {
    CaseGenerator gen(config.seed, 2, std::max<std::size_t>(2, config.max_features));
    std::vector<RandomCase> cases;
    cases.reserve(config.classified_cases + config.rejected_cases);
    for (std::size_t i = 0; i < config.classified_cases; ++i) {
        cases.push_back(gen.next_with_label(i % 2 == 0 ? Label::Positive : Label::Negative));
    }
    for (std::size_t i = 0; i < config.rejected_cases; ++i) {
        cases.push_back(gen.next_with_label(Label::Reject));
    }
    return check_against_oracle(cases, explainer);
}

}  // namespace minabro
