#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "minabro/dataset.hpp"
#include "minabro/model.hpp"

namespace minabro {

struct LogisticOptions {
    double l2 = 1.0;             // penalty l2/(2m) * |w|^2, bias unpenalized
    double learning_rate = 0.1;  // halved whenever a step increases the loss
    std::size_t max_iterations = 10'000;
    double tolerance = 1e-6;     // on the gradient norm
};

struct TrainResult {
    LinearModel model;
    bool converged = false;
    std::size_t iterations = 0;
    double loss = 0.0;
    double gradient_norm = 0.0;
};

/// Batch gradient descent on the mean logistic loss, starting from zero.
/// Domains default to [min(0, col min), max(1, col max)] per feature.
TrainResult train_logistic(const Dataset& data, const LogisticOptions& options = {},
                           std::optional<std::vector<FeatureDomain>> domains = std::nullopt);

}  // namespace minabro
