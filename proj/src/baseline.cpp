#include "minabro/baseline.hpp"

namespace minabro {

Explanation subset_minimal_explanation(const RejectClassifier& clf, const Instance& instance) {
    const Prediction pred = predict(clf, instance);
    const ExplanationKind kind = kind_for(pred.label);
    const CoefficientProfile p = coefficient_profile(clf, instance);
    const std::size_t n = p.size();

    // Extrema of the current set, starting from everything fixed.
    double upper = p.baseline_max;
    double lower = p.baseline_min;
    for (std::size_t j = 0; j < n; ++j) {
        upper += p.beta[j] - p.alpha_max[j];
        lower += p.beta[j] - p.alpha_min[j];
    }

    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < n; ++j) {
        const double upper_without = upper - (p.beta[j] - p.alpha_max[j]);
        const double lower_without = lower - (p.beta[j] - p.alpha_min[j]);
        if (bounds_hold(clf, kind, lower_without, upper_without)) {
            upper = upper_without;
            lower = lower_without;
        } else {
            kept.push_back(j);
        }
    }
    return make_explanation(std::move(kept), kind, false, n);
}

}  // namespace minabro
