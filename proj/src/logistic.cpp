#include "minabro/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace minabro {

namespace {

// log(1 + exp(-z)) without overflow.
double softplus_neg(double z) {
    return z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

struct Objective {
    const Dataset& data;
    double l2;

    double loss(const std::vector<double>& w, double b) const {
        const std::size_t m = data.rows();
        double total = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const auto x = data.row(r);
            double z = b;
            for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
            total += softplus_neg(data.labels[r] * z);
        }
        double norm2 = 0.0;
        for (double v : w) norm2 += v * v;
        return (total + 0.5 * l2 * norm2) / static_cast<double>(m);
    }

    // Returns the gradient norm; fills gw and gb.
    double gradient(const std::vector<double>& w, double b, std::vector<double>& gw, double& gb) const {
        const std::size_t m = data.rows();
        std::fill(gw.begin(), gw.end(), 0.0);
        gb = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const auto x = data.row(r);
            double z = b;
            for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[j];
            const double y = data.labels[r];
            // d/dz log(1 + exp(-y z)) = -y * sigmoid(-y z)
            const double coef = -y / (1.0 + std::exp(y * z));
            for (std::size_t j = 0; j < w.size(); ++j) gw[j] += coef * x[j];
            gb += coef;
        }
        const double inv_m = 1.0 / static_cast<double>(m);
        double norm2 = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            gw[j] = (gw[j] + l2 * w[j]) * inv_m;
            norm2 += gw[j] * gw[j];
        }
        gb *= inv_m;
        norm2 += gb * gb;
        return std::sqrt(norm2);
    }
};

std::vector<FeatureDomain> default_domains(const Dataset& data) {
    std::vector<FeatureDomain> out(data.cols(), FeatureDomain{0.0, 1.0});
    for (std::size_t r = 0; r < data.rows(); ++r) {
        const auto row = data.row(r);
        for (std::size_t c = 0; c < data.cols(); ++c) {
            out[c].lower = std::min(out[c].lower, row[c]);
            out[c].upper = std::max(out[c].upper, row[c]);
        }
    }
    return out;
}

}  // namespace

TrainResult train_logistic(const Dataset& data, const LogisticOptions& options,
                           std::optional<std::vector<FeatureDomain>> domains) {
    if (data.rows() == 0 || data.cols() == 0) throw std::invalid_argument("empty training set");
    const bool has_pos = std::find(data.labels.begin(), data.labels.end(), 1) != data.labels.end();
    const bool has_neg = std::find(data.labels.begin(), data.labels.end(), -1) != data.labels.end();
    if (!has_pos || !has_neg) throw std::invalid_argument("training set contains a single class");
    if (!(options.learning_rate > 0.0) || options.l2 < 0.0) {
        throw std::invalid_argument("learning rate must be positive and l2 non-negative");
    }

    const Objective obj{data, options.l2};
    std::vector<double> w(data.cols(), 0.0);
    double b = 0.0;
    std::vector<double> gw(w.size());
    double gb = 0.0;
    double rate = options.learning_rate;
    double loss = obj.loss(w, b);
    double gnorm = obj.gradient(w, b, gw, gb);

    std::size_t it = 0;
    bool converged = gnorm <= options.tolerance;
    std::vector<double> trial(w.size());
    while (!converged && it < options.max_iterations) {
        ++it;
        for (std::size_t j = 0; j < w.size(); ++j) trial[j] = w[j] - rate * gw[j];
        const double trial_b = b - rate * gb;
        const double trial_loss = obj.loss(trial, trial_b);
        if (trial_loss > loss) {
            rate *= 0.5;
            if (rate < 1e-12) break;
            continue;
        }
        w.swap(trial);
        b = trial_b;
        loss = trial_loss;
        gnorm = obj.gradient(w, b, gw, gb);
        converged = gnorm <= options.tolerance;
    }

    return TrainResult{LinearModel(std::move(w), b, domains ? std::move(*domains) : default_domains(data)),
                       converged, it, loss, gnorm};
}

}  // namespace minabro
