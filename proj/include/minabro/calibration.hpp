#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "minabro/model.hpp"

namespace minabro {

/// Cost of abstaining, relative to a misclassification. Must lie in (0, 1].
class RiskConfig {
public:
    explicit RiskConfig(double rejection_cost);
    double rejection_cost() const noexcept { return rejection_cost_; }

private:
    double rejection_cost_;
};

/// error_ratio counts accepted-but-wrong instances over all instances;
/// empirical_risk = error_ratio + rejection_cost * rejection_ratio.
struct RiskReport {
    double error_ratio = 0.0;
    double rejection_ratio = 0.0;
    double empirical_risk = 0.0;
    double t_minus = 0.0;
    double t_plus = 0.0;
};

/// Applies the reject rule to each score and tallies the risk. Labels are -1/+1.
RiskReport evaluate_risk(std::span<const double> scores, std::span<const int> labels, double t_minus,
                         double t_plus, const RiskConfig& config, double epsilon = kDefaultEpsilon);

/// Candidate thresholds, ascending: two points inside every gap between
/// consecutive distinct scores (at one and two thirds) and two on each
/// side of the score range. Any achievable split of the sorted scores into
/// negative / rejected / positive runs is reachable with t_minus < t_plus.
std::vector<double> candidate_thresholds(std::span<const double> scores);

/// Exhaustive search over all ordered candidate pairs. Ties on risk go to
/// the narrowest band, then the smallest t_plus.
RiskReport calibrate_thresholds(std::span<const double> scores, std::span<const int> labels,
                                const RiskConfig& config, double epsilon = kDefaultEpsilon);

}  // namespace minabro
