#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "minabro/model.hpp"

namespace minabro {

/// The 0-1 program for a rejected instance, constants moved to the right:
///
///     min  sum z_j
///     s.t. sum z_j * correction_up[j]   <= slack_up   + tolerance
///          sum z_j * correction_down[j] >= slack_down - tolerance
///
/// correction_up[j] = beta_j - alpha_max_j (<= 0) lowers the upper bound,
/// correction_down[j] = beta_j - alpha_min_j (>= 0) raises the lower bound.
struct RejectionIlp {
    std::vector<double> correction_up;
    std::vector<double> correction_down;
    double slack_up = 0.0;    // t_plus - baseline_max
    double slack_down = 0.0;  // t_minus - baseline_min
    double tolerance = kDefaultEpsilon;

    std::size_t size() const noexcept { return correction_up.size(); }
    /// Checks both rows for the selection z_j = 1 iff j in `selected`.
    bool feasible(const std::vector<std::size_t>& selected) const;
};

struct SolverLimits {
    std::uint64_t node_limit = 10'000'000;
    std::chrono::duration<double> time_limit = std::chrono::seconds(30);
};

struct IlpSolution {
    std::vector<std::size_t> selected;  // sorted ascending
    std::size_t objective = 0;
    bool optimal = false;
    std::uint64_t nodes_explored = 0;
    std::chrono::nanoseconds solve_time{0};
};

struct RejectionResult {
    Explanation explanation;
    IlpSolution solution;
};

/// Throws std::invalid_argument unless the instance is rejected.
RejectionIlp build_rejection_ilp(const RejectClassifier& clf, const Instance& instance);

/// Exact best-first branch-and-bound. Each node is bounded by the larger of
/// the single-row cover counts, a count that splits features by the rows
/// they help, and a weighted relaxation of both rows. On budget exhaustion
/// returns the best incumbent with optimal = false.
IlpSolution solve_rejection_ilp(const RejectionIlp& ilp, const SolverLimits& limits = {});

RejectionResult explain_rejection(const RejectClassifier& clf, const Instance& instance,
                                  const SolverLimits& limits = {});

}  // namespace minabro
