#include "minabro/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace minabro {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

void require_same_size(const RejectClassifier& clf, const Instance& instance) {
    if (clf.num_features() != instance.size()) {
        throw std::invalid_argument("instance has " + std::to_string(instance.size()) +
                                    " features, model expects " +
                                    std::to_string(clf.num_features()));
    }
}

double corrected_sum(double baseline, std::span<const double> beta, std::span<const double> alpha,
                     std::span<const std::size_t> fixed) {
    double total = baseline;
    for (std::size_t j : fixed) {
        if (j >= beta.size()) {
            throw std::out_of_range("feature index " + std::to_string(j) + " out of range");
        }
        total += beta[j] - alpha[j];
    }
    return total;
}

}  // namespace

LinearModel::LinearModel(std::vector<double> weights, double bias, std::vector<FeatureDomain> domains)
    : weights_(std::move(weights)), bias_(bias), domains_(std::move(domains)) {
    if (weights_.empty()) throw std::invalid_argument("model needs at least one feature");
    if (weights_.size() != domains_.size()) {
        throw std::invalid_argument("weights and domains differ in length");
    }
    require_finite(bias_, "bias");
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        require_finite(weights_[i], "weight");
        require_finite(domains_[i].lower, "domain bound");
        require_finite(domains_[i].upper, "domain bound");
        if (domains_[i].lower > domains_[i].upper) {
            throw std::invalid_argument("domain " + std::to_string(i) + " has lower > upper");
        }
    }
}

Instance::Instance(const LinearModel& model, std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() != model.num_features()) {
        throw std::invalid_argument("instance has " + std::to_string(values_.size()) +
                                    " features, model expects " +
                                    std::to_string(model.num_features()));
    }
    const auto domains = model.domains();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        require_finite(values_[i], "feature value");
        if (values_[i] < domains[i].lower || values_[i] > domains[i].upper) {
            throw std::invalid_argument("feature " + std::to_string(i) + " value " +
                                        std::to_string(values_[i]) + " outside its domain");
        }
    }
}

std::string_view to_string(Label label) noexcept {
    switch (label) {
        case Label::Positive: return "POSITIVE";
        case Label::Negative: return "NEGATIVE";
        case Label::Reject: return "REJECT";
    }
    return "?";
}

std::string_view to_string(ExplanationKind kind) noexcept {
    switch (kind) {
        case ExplanationKind::Positive: return "POSITIVE";
        case ExplanationKind::Negative: return "NEGATIVE";
        case ExplanationKind::Rejection: return "REJECTION";
    }
    return "?";
}

ExplanationKind kind_for(Label label) noexcept {
    switch (label) {
        case Label::Positive: return ExplanationKind::Positive;
        case Label::Negative: return ExplanationKind::Negative;
        case Label::Reject: break;
    }
    return ExplanationKind::Rejection;
}

RejectClassifier::RejectClassifier(LinearModel model, double t_minus, double t_plus, double epsilon)
    : model_(std::move(model)), t_minus_(t_minus), t_plus_(t_plus), epsilon_(epsilon) {
    require_finite(t_minus_, "t_minus");
    require_finite(t_plus_, "t_plus");
    if (!(t_minus_ < t_plus_)) throw std::invalid_argument("t_minus must be below t_plus");
    if (!(epsilon_ >= 0.0) || !std::isfinite(epsilon_)) {
        throw std::invalid_argument("epsilon must be finite and non-negative");
    }
}

Explanation make_explanation(std::vector<std::size_t> indices, ExplanationKind kind,
                             bool certified_minimum, std::size_t num_features) {
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
        throw std::invalid_argument("explanation has duplicate feature indices");
    }
    if (!indices.empty() && indices.back() >= num_features) {
        throw std::out_of_range("explanation index out of range");
    }
    return Explanation{std::move(indices), kind, certified_minimum};
}

double score(const LinearModel& model, const Instance& instance) {
    if (model.num_features() != instance.size()) {
        throw std::invalid_argument("instance has " + std::to_string(instance.size()) +
                                    " features, model expects " +
                                    std::to_string(model.num_features()));
    }
    const auto w = model.weights();
    const auto x = instance.values();
    double s = model.bias();
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
    return s;
}

Label label_for_score(const RejectClassifier& clf, double s) noexcept {
    if (s > clf.t_plus() + clf.epsilon()) return Label::Positive;
    if (s < clf.t_minus() - clf.epsilon()) return Label::Negative;
    return Label::Reject;
}

Prediction predict(const RejectClassifier& clf, const Instance& instance) {
    const double s = score(clf.model(), instance);
    return {label_for_score(clf, s), s};
}

CoefficientProfile coefficient_profile(const LinearModel& model, const Instance& instance) {
    if (model.num_features() != instance.size()) {
        throw std::invalid_argument("instance/model dimension mismatch");
    }
    const std::size_t n = model.num_features();
    const auto w = model.weights();
    const auto dom = model.domains();
    const auto x = instance.values();

    CoefficientProfile p;
    p.alpha_max.resize(n);
    p.alpha_min.resize(n);
    p.beta.resize(n);
    p.delta_plus.resize(n);
    p.delta_minus.resize(n);
    p.baseline_max = model.bias();
    p.baseline_min = model.bias();
    for (std::size_t j = 0; j < n; ++j) {
        const double hi = w[j] >= 0.0 ? w[j] * dom[j].upper : w[j] * dom[j].lower;
        const double lo = w[j] >= 0.0 ? w[j] * dom[j].lower : w[j] * dom[j].upper;
        const double obs = w[j] * x[j];
        p.alpha_max[j] = hi;
        p.alpha_min[j] = lo;
        p.beta[j] = obs;
        p.delta_plus[j] = obs - lo;
        p.delta_minus[j] = hi - obs;
        p.baseline_max += hi;
        p.baseline_min += lo;
    }
    return p;
}

CoefficientProfile coefficient_profile(const RejectClassifier& clf, const Instance& instance) {
    require_same_size(clf, instance);
    return coefficient_profile(clf.model(), instance);
}

double s_max(const CoefficientProfile& profile, std::span<const std::size_t> fixed) {
    return corrected_sum(profile.baseline_max, profile.beta, profile.alpha_max, fixed);
}

double s_min(const CoefficientProfile& profile, std::span<const std::size_t> fixed) {
    return corrected_sum(profile.baseline_min, profile.beta, profile.alpha_min, fixed);
}

bool bounds_hold(const RejectClassifier& clf, ExplanationKind kind, double lower, double upper) noexcept {
    const double eps = clf.epsilon();
    switch (kind) {
        case ExplanationKind::Positive: return lower >= clf.t_plus() - eps;
        case ExplanationKind::Negative: return upper <= clf.t_minus() + eps;
        case ExplanationKind::Rejection:
            return upper <= clf.t_plus() + eps && lower >= clf.t_minus() - eps;
    }
    return false;
}

bool is_valid_explanation(const RejectClassifier& clf, const Instance& instance,
                          std::span<const std::size_t> fixed, ExplanationKind kind) {
    const Prediction pred = predict(clf, instance);
    if (kind_for(pred.label) != kind) {
        throw std::invalid_argument("instance is predicted " + std::string(to_string(pred.label)) +
                                    ", cannot check a " + std::string(to_string(kind)) +
                                    " explanation");
    }
    const CoefficientProfile profile = coefficient_profile(clf, instance);
    return bounds_hold(clf, kind, s_min(profile, fixed), s_max(profile, fixed));
}

bool touches_threshold(const RejectClassifier& clf, const Instance& instance,
                       std::span<const std::size_t> fixed, ExplanationKind kind) {
    const CoefficientProfile profile = coefficient_profile(clf, instance);
    const double lo = s_min(profile, fixed);
    const double hi = s_max(profile, fixed);
    const double eps = clf.epsilon();
    switch (kind) {
        case ExplanationKind::Positive: return lo <= clf.t_plus() + eps;
        case ExplanationKind::Negative: return hi >= clf.t_minus() - eps;
        case ExplanationKind::Rejection:
            return hi >= clf.t_plus() - eps || lo <= clf.t_minus() + eps;
    }
    return false;
}

}  // namespace minabro
