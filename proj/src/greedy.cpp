#include "minabro/greedy.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace minabro {

namespace {

void require_label(const RejectClassifier& clf, const Instance& instance, Label expected) {
    const Prediction pred = predict(clf, instance);
    if (pred.label != expected) {
        throw std::invalid_argument("instance is predicted " + std::string(to_string(pred.label)) +
                                    ", expected " + std::string(to_string(expected)));
    }
}

// Feature indices by non-increasing gain, ties by ascending index.
//
// Stable LSD radix sort over the IEEE bit pattern: for non-negative doubles
// the bit pattern orders like the value, so complementing it gives a
// descending key. Six passes of 11-bit digits, always all of them, so the
// work is linear in n regardless of how the gains are spread.
std::vector<std::size_t> order_by_gain(std::vector<double>& gains) {
    constexpr unsigned kDigitBits = 11;
    constexpr std::size_t kBuckets = std::size_t{1} << kDigitBits;
    const std::size_t n = gains.size();
    std::vector<std::uint64_t> keys(n);
    for (std::size_t j = 0; j < n; ++j) {
        gains[j] = std::max(gains[j], 0.0) + 0.0;  // also folds -0.0 into +0.0
        keys[j] = ~std::bit_cast<std::uint64_t>(gains[j]);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::size_t> scratch(n);
    std::vector<std::size_t> offsets(kBuckets + 1);
    for (unsigned shift = 0; shift < 64; shift += kDigitBits) {
        std::fill(offsets.begin(), offsets.end(), 0);
        for (std::size_t j = 0; j < n; ++j) ++offsets[((keys[j] >> shift) & (kBuckets - 1)) + 1];
        for (std::size_t b = 1; b <= kBuckets; ++b) offsets[b] += offsets[b - 1];
        for (std::size_t idx : order) scratch[offsets[(keys[idx] >> shift) & (kBuckets - 1)]++] = idx;
        order.swap(scratch);
    }
    return order;
}

// Takes the shortest prefix of the gain-sorted features whose gains reach
// `margin` (up to epsilon). Gains are non-negative, so a prefix of the
// largest gains is a minimum-cardinality cover.
GreedyResult cover_margin(std::vector<double> gains_by_feature, double margin, double epsilon,
                          ExplanationKind kind) {
    const std::size_t n = gains_by_feature.size();
    GreedyTrace trace;
    trace.required_margin = margin;
    trace.ordered_indices = order_by_gain(gains_by_feature);
    trace.gains.resize(n);
    for (std::size_t r = 0; r < n; ++r) trace.gains[r] = gains_by_feature[trace.ordered_indices[r]];

    const double target = margin - epsilon;
    double covered = 0.0;
    std::size_t k = 0;
    while (covered < target && k < n) {
        covered += trace.gains[k];
        ++k;
    }
    trace.prefix_length = k;

    std::vector<std::size_t> chosen(trace.ordered_indices.begin(),
                                    trace.ordered_indices.begin() + static_cast<std::ptrdiff_t>(k));
    // Running out of features only happens through rounding at the boundary;
    // the full set is valid by construction, but is then not a proven optimum.
    const bool certified = covered >= target;
    return GreedyResult{make_explanation(std::move(chosen), kind, certified, n), std::move(trace)};
}

}  // namespace

GreedyResult explain_positive(const RejectClassifier& clf, const Instance& instance) {
    require_label(clf, instance, Label::Positive);
    CoefficientProfile profile = coefficient_profile(clf, instance);
    const double margin = clf.t_plus() - profile.baseline_min;
    return cover_margin(std::move(profile.delta_plus), margin, clf.epsilon(), ExplanationKind::Positive);
}

GreedyResult explain_negative(const RejectClassifier& clf, const Instance& instance) {
    require_label(clf, instance, Label::Negative);
    CoefficientProfile profile = coefficient_profile(clf, instance);
    const double margin = profile.baseline_max - clf.t_minus();
    return cover_margin(std::move(profile.delta_minus), margin, clf.epsilon(), ExplanationKind::Negative);
}

}  // namespace minabro
