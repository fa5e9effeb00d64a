#pragma once

#include <cstdint>
#include <optional>

#include "minabro/model.hpp"
#include "minabro/rejection.hpp"

namespace minabro {

struct ExplainOutcome {
    Prediction prediction;
    Explanation explanation;
    std::optional<std::uint64_t> nodes;  // set for rejected instances
};

/// Predicts, then routes to the greedy explainer for accepted instances and
/// to the branch-and-bound solver for rejected ones.
ExplainOutcome explain(const RejectClassifier& clf, const Instance& instance,
                       const SolverLimits& limits = {});

}  // namespace minabro
