#include "minabro/explain.hpp"

#include "minabro/greedy.hpp"

namespace minabro {

ExplainOutcome explain(const RejectClassifier& clf, const Instance& instance, const SolverLimits& limits) {
    const Prediction pred = predict(clf, instance);
    switch (pred.label) {
        case Label::Positive: return {pred, explain_positive(clf, instance).explanation, std::nullopt};
        case Label::Negative: return {pred, explain_negative(clf, instance).explanation, std::nullopt};
        case Label::Reject: break;
    }
    RejectionResult r = explain_rejection(clf, instance, limits);
    return {pred, std::move(r.explanation), r.solution.nodes_explored};
}

}  // namespace minabro
