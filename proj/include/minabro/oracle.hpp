#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "minabro/model.hpp"

namespace minabro {

inline constexpr std::size_t kOracleMaxFeatures = 20;

/// Exhaustive search by increasing cardinality, lexicographic within a size.
/// Bounds are recomputed from the raw weights and domains for every subset.
/// Throws std::invalid_argument when n > kOracleMaxFeatures.
Explanation brute_force_minimum(const RejectClassifier& clf, const Instance& instance);

/// Completes the free features at random (`trials` uniform draws) and at
/// the corners of the box, and checks that every completion keeps the
/// outcome `kind`. Scores within 2*epsilon of a threshold count as agreeing.
bool sampled_sufficiency_check(const RejectClassifier& clf, const Instance& instance,
                               std::span<const std::size_t> fixed, ExplanationKind kind,
                               std::size_t trials, std::uint64_t seed = 0);

struct RandomCase {
    RejectClassifier classifier;
    Instance instance;
};

/// Seeded random models over [0,1]^n: weights U[-1,1], bias U[-0.5,0.5],
/// a rejection band of width U[0.05,1] placed around zero.
class CaseGenerator {
public:
    explicit CaseGenerator(std::uint64_t seed, std::size_t min_features = 2, std::size_t max_features = 12);

    RandomCase next();
    /// Draws until the instance receives `label`.
    RandomCase next_with_label(Label label);

private:
    std::mt19937_64 rng_;
    std::size_t min_features_;
    std::size_t max_features_;
};

using Explainer = std::function<Explanation(const RejectClassifier&, const Instance&)>;

struct OracleSuiteConfig {
    std::size_t classified_cases = 500;
    std::size_t rejected_cases = 500;
    std::size_t max_features = 12;
    std::uint64_t seed = 1;
};

struct OracleSuiteSummary {
    std::size_t classified_total = 0;
    std::size_t classified_agree = 0;
    std::size_t rejected_total = 0;
    std::size_t rejected_agree = 0;
    std::vector<std::string> mismatches;

    bool all_agree() const noexcept {
        return classified_agree == classified_total && rejected_agree == rejected_total;
    }
};

/// Default explainer: greedy for accepted instances, exact solver for rejected.
Explanation minabro_explainer(const RejectClassifier& clf, const Instance& instance);

/// Compares `explainer` against brute force on each case. A case agrees when
/// sizes match, the set is valid, and it is marked certified.
OracleSuiteSummary check_against_oracle(const std::vector<RandomCase>& cases,
                                        const Explainer& explainer = minabro_explainer);

/// Generates the requested mix of classified (alternating positive and
/// negative) and rejected cases, then runs check_against_oracle.
OracleSuiteSummary run_oracle_suite(const OracleSuiteConfig& config,
                                    const Explainer& explainer = minabro_explainer);

}  // namespace minabro
