#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace minabro {

// Single tolerance used for every threshold comparison.
inline constexpr double kDefaultEpsilon = 1e-9;

struct FeatureDomain {
    double lower = 0.0;
    double upper = 1.0;
};

/// Affine scorer w.x + b over a box of bounded feature domains.
class LinearModel {
public:
    LinearModel(std::vector<double> weights, double bias, std::vector<FeatureDomain> domains);

    std::size_t num_features() const noexcept { return weights_.size(); }
    std::span<const double> weights() const noexcept { return weights_; }
    double bias() const noexcept { return bias_; }
    std::span<const FeatureDomain> domains() const noexcept { return domains_; }

private:
    std::vector<double> weights_;
    double bias_;
    std::vector<FeatureDomain> domains_;
};

/// A feature vector that lies inside the domains of the model it was built against.
class Instance {
public:
    Instance(const LinearModel& model, std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

enum class Label { Negative = -1, Reject = 0, Positive = 1 };

enum class ExplanationKind { Positive, Negative, Rejection };

std::string_view to_string(Label label) noexcept;
std::string_view to_string(ExplanationKind kind) noexcept;
ExplanationKind kind_for(Label label) noexcept;

/// Linear model with a rejection band [t_minus, t_plus].
class RejectClassifier {
public:
    RejectClassifier(LinearModel model, double t_minus, double t_plus,
                     double epsilon = kDefaultEpsilon);

    const LinearModel& model() const noexcept { return model_; }
    double t_minus() const noexcept { return t_minus_; }
    double t_plus() const noexcept { return t_plus_; }
    double epsilon() const noexcept { return epsilon_; }
    std::size_t num_features() const noexcept { return model_.num_features(); }

private:
    LinearModel model_;
    double t_minus_;
    double t_plus_;
    double epsilon_;
};

struct Prediction {
    Label label;
    double score;
};

/// Per-feature worst-case and observed contributions for one instance.
///
/// alpha_max/alpha_min are the largest/smallest contribution a free feature
/// can make over its domain, beta the contribution at the observed value.
/// delta_plus = beta - alpha_min and delta_minus = alpha_max - beta are the
/// amounts by which fixing the feature raises s_min or lowers s_max.
struct CoefficientProfile {
    std::vector<double> alpha_max;
    std::vector<double> alpha_min;
    std::vector<double> beta;
    std::vector<double> delta_plus;
    std::vector<double> delta_minus;
    double baseline_max = 0.0;  // b + sum(alpha_max)
    double baseline_min = 0.0;  // b + sum(alpha_min)

    std::size_t size() const noexcept { return beta.size(); }
};

struct Explanation {
    std::vector<std::size_t> indices;  // sorted ascending, unique
    ExplanationKind kind = ExplanationKind::Positive;
    bool certified_minimum = false;

    std::size_t size() const noexcept { return indices.size(); }
};

/// Sorts and validates an index set against n features; throws on duplicates
/// or out-of-range entries.
Explanation make_explanation(std::vector<std::size_t> indices, ExplanationKind kind,
                             bool certified_minimum, std::size_t num_features);

double score(const LinearModel& model, const Instance& instance);

Label label_for_score(const RejectClassifier& clf, double score) noexcept;
Prediction predict(const RejectClassifier& clf, const Instance& instance);

CoefficientProfile coefficient_profile(const RejectClassifier& clf, const Instance& instance);
CoefficientProfile coefficient_profile(const LinearModel& model, const Instance& instance);

/// Largest score reachable with `fixed` held at the instance values.
double s_max(const CoefficientProfile& profile, std::span<const std::size_t> fixed);
/// Smallest score reachable with `fixed` held at the instance values.
double s_min(const CoefficientProfile& profile, std::span<const std::size_t> fixed);

/// Non-strict bound test for one kind, given precomputed extrema.
bool bounds_hold(const RejectClassifier& clf, ExplanationKind kind, double lower, double upper) noexcept;

/// True iff fixing `fixed` forces the outcome `kind` for every completion.
/// Throws std::invalid_argument if the instance is not predicted as `kind`.
bool is_valid_explanation(const RejectClassifier& clf, const Instance& instance,
                          std::span<const std::size_t> fixed, ExplanationKind kind);

/// Diagnostic: the relevant bound sits within epsilon of a threshold, so the
/// set is only valid under the non-strict reading of the rejection band.
bool touches_threshold(const RejectClassifier& clf, const Instance& instance,
                       std::span<const std::size_t> fixed, ExplanationKind kind);

}  // namespace minabro
