#pragma once

#include "minabro/model.hpp"

namespace minabro {

/// Deletion-based subset-minimal explanation for any outcome.
///
/// Starts from the full feature set and drops features in ascending index
/// order whenever the remainder still forces the predicted outcome. The
/// result is irredundant but carries no size guarantee, so
/// certified_minimum is always false.
Explanation subset_minimal_explanation(const RejectClassifier& clf, const Instance& instance);

}  // namespace minabro
