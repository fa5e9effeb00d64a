#pragma once

#include <cstddef>
#include <vector>

#include "minabro/model.hpp"

namespace minabro {

/// Record of one greedy run: features ordered by gain (ties by index), the
/// margin the gains had to cover, and how many of them were taken.
struct GreedyTrace {
    std::vector<std::size_t> ordered_indices;
    std::vector<double> gains;
    double required_margin = 0.0;
    std::size_t prefix_length = 0;
};

struct GreedyResult {
    Explanation explanation;
    GreedyTrace trace;
};

// Minimum-size explanations for accepted predictions. Both run in
// O(n log n) and throw std::invalid_argument on a label mismatch.
GreedyResult explain_positive(const RejectClassifier& clf, const Instance& instance);
GreedyResult explain_negative(const RejectClassifier& clf, const Instance& instance);

}  // namespace minabro
