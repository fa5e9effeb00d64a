#include "minabro/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace minabro {

namespace {

// Risk values that differ only by rounding compare equal.
constexpr double kRiskTieTolerance = 1e-12;

void validate_inputs(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("scores and labels differ in length");
    for (double s : scores) {
        if (!std::isfinite(s)) throw std::invalid_argument("non-finite score");
    }
    for (int y : labels) {
        if (y != -1 && y != 1) throw std::invalid_argument("labels must be -1 or +1");
    }
}

RiskReport make_report(std::size_t errors, std::size_t rejected, std::size_t total, double t_minus,
                       double t_plus, const RiskConfig& config) {
    RiskReport r;
    r.t_minus = t_minus;
    r.t_plus = t_plus;
    if (total > 0) {
        r.error_ratio = static_cast<double>(errors) / static_cast<double>(total);
        r.rejection_ratio = static_cast<double>(rejected) / static_cast<double>(total);
    }
    r.empirical_risk = r.error_ratio + config.rejection_cost() * r.rejection_ratio;
    return r;
}

}  // namespace

RiskConfig::RiskConfig(double rejection_cost) : rejection_cost_(rejection_cost) {
    if (!(rejection_cost_ > 0.0 && rejection_cost_ <= 1.0)) {
        throw std::invalid_argument("rejection cost must lie in (0, 1]");
    }
}

RiskReport evaluate_risk(std::span<const double> scores, std::span<const int> labels, double t_minus,
                         double t_plus, const RiskConfig& config, double epsilon) {
    validate_inputs(scores, labels);
    if (!(t_minus < t_plus)) throw std::invalid_argument("t_minus must be below t_plus");
    std::size_t errors = 0;
    std::size_t rejected = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] > t_plus + epsilon) {
            errors += labels[i] != 1;
        } else if (scores[i] < t_minus - epsilon) {
            errors += labels[i] != -1;
        } else {
            ++rejected;
        }
    }
    return make_report(errors, rejected, scores.size(), t_minus, t_plus, config);
}

std::vector<double> candidate_thresholds(std::span<const double> scores) {
    if (scores.empty()) throw std::invalid_argument("no scores to calibrate on");
    std::vector<double> unique(scores.begin(), scores.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    std::vector<double> grid;
    grid.reserve(2 * unique.size() + 2);
    grid.push_back(unique.front() - 2.0);
    grid.push_back(unique.front() - 1.0);
    for (std::size_t i = 0; i + 1 < unique.size(); ++i) {
        const double gap = unique[i + 1] - unique[i];
        grid.push_back(unique[i] + gap / 3.0);
        grid.push_back(unique[i] + 2.0 * gap / 3.0);
    }
    grid.push_back(unique.back() + 1.0);
    grid.push_back(unique.back() + 2.0);
    return grid;
}

RiskReport calibrate_thresholds(std::span<const double> scores, std::span<const int> labels,
                                const RiskConfig& config, double epsilon) {
    validate_inputs(scores, labels);
    if (scores.size() < 2) throw std::invalid_argument("need at least two scored instances");
    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), -1) != labels.end();
    if (!has_pos || !has_neg) throw std::invalid_argument("calibration needs both classes present");

    const std::vector<double> grid = candidate_thresholds(scores);
    const std::size_t g = grid.size();
    const std::size_t m = scores.size();

    // For each candidate t: positives/negatives strictly below t - eps
    // (predicted negative when t = t_minus) and strictly above t + eps
    // (predicted positive when t = t_plus).
    std::vector<std::size_t> pos_below(g, 0), neg_below(g, 0), pos_above(g, 0), neg_above(g, 0);
    std::vector<std::pair<double, int>> sorted(m);
    for (std::size_t i = 0; i < m; ++i) sorted[i] = {scores[i], labels[i]};
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> pos_prefix(m + 1, 0);
    for (std::size_t i = 0; i < m; ++i) pos_prefix[i + 1] = pos_prefix[i] + (sorted[i].second == 1);
    const auto split_at = [&](auto pred) {
        return static_cast<std::size_t>(
            std::partition_point(sorted.begin(), sorted.end(), pred) - sorted.begin());
    };
    for (std::size_t k = 0; k < g; ++k) {
        const std::size_t below = split_at([&](const auto& p) { return p.first < grid[k] - epsilon; });
        const std::size_t not_above = split_at([&](const auto& p) { return p.first <= grid[k] + epsilon; });
        pos_below[k] = pos_prefix[below];
        neg_below[k] = below - pos_prefix[below];
        pos_above[k] = pos_prefix[m] - pos_prefix[not_above];
        neg_above[k] = (m - not_above) - pos_above[k];
    }

    RiskReport best;
    bool have_best = false;
    for (std::size_t a = 0; a < g; ++a) {
        for (std::size_t b = a + 1; b < g; ++b) {
            const std::size_t errors = pos_below[a] + neg_above[b];
            const std::size_t accepted = pos_below[a] + neg_below[a] + pos_above[b] + neg_above[b];
            const RiskReport r = make_report(errors, m - accepted, m, grid[a], grid[b], config);
            if (!have_best) {
                best = r;
                have_best = true;
                continue;
            }
            const double diff = r.empirical_risk - best.empirical_risk;
            if (diff < -kRiskTieTolerance) {
                best = r;
            } else if (diff <= kRiskTieTolerance) {
                const double width = r.t_plus - r.t_minus;
                const double best_width = best.t_plus - best.t_minus;
                if (width < best_width || (width == best_width && r.t_plus < best.t_plus)) best = r;
            }
        }
    }
    return best;
}

}  // namespace minabro
