#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "minabro/model.hpp"

namespace minabro::testing {

inline LinearModel unit_box_model(std::vector<double> w, double b = 0.0) {
    const std::size_t n = w.size();
    return LinearModel(std::move(w), b, std::vector<FeatureDomain>(n, FeatureDomain{0.0, 1.0}));
}

inline RejectClassifier unit_box_classifier(std::vector<double> w, double b, double t_minus, double t_plus) {
    return RejectClassifier(unit_box_model(std::move(w), b), t_minus, t_plus);
}

/// Extreme scores over every corner of the free features, by enumeration.
struct CornerExtrema {
    double lowest;
    double highest;
};

inline CornerExtrema enumerate_corners(const LinearModel& model, std::span<const double> x,
                                       const std::vector<std::size_t>& fixed) {
    const std::size_t n = model.num_features();
    std::vector<char> is_fixed(n, 0);
    for (std::size_t j : fixed) is_fixed[j] = 1;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < n; ++j) {
        if (!is_fixed[j]) free.push_back(j);
    }
    CornerExtrema out{1e300, -1e300};
    std::vector<double> point(x.begin(), x.end());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
        for (std::size_t k = 0; k < free.size(); ++k) {
            const auto& d = model.domains()[free[k]];
            point[free[k]] = (mask >> k) & 1u ? d.upper : d.lower;
        }
        double s = model.bias();
        for (std::size_t j = 0; j < n; ++j) s += model.weights()[j] * point[j];
        out.lowest = std::min(out.lowest, s);
        out.highest = std::max(out.highest, s);
    }
    return out;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

}  // namespace minabro::testing
