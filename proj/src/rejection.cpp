#include "minabro/rejection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

namespace minabro {

bool RejectionIlp::feasible(const std::vector<std::size_t>& selected) const {
    double up = 0.0;
    double down = 0.0;
    for (std::size_t j : selected) {
        if (j >= size()) throw std::out_of_range("selection index out of range");
        up += correction_up[j];
        down += correction_down[j];
    }
    return up <= slack_up + tolerance && down >= slack_down - tolerance;
}

RejectionIlp build_rejection_ilp(const RejectClassifier& clf, const Instance& instance) {
    const Prediction pred = predict(clf, instance);
    if (pred.label != Label::Reject) {
        throw std::invalid_argument("instance is predicted " + std::string(to_string(pred.label)) +
                                    ", not rejected");
    }
    const CoefficientProfile p = coefficient_profile(clf, instance);
    RejectionIlp ilp;
    ilp.correction_up.resize(p.size());
    ilp.correction_down.resize(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        ilp.correction_up[j] = p.beta[j] - p.alpha_max[j];
        ilp.correction_down[j] = p.beta[j] - p.alpha_min[j];
    }
    ilp.slack_up = clf.t_plus() - p.baseline_max;
    ilp.slack_down = clf.t_minus() - p.baseline_min;
    ilp.tolerance = clf.epsilon();
    return ilp;
}

namespace {

constexpr std::uint32_t kInfeasible = std::numeric_limits<std::uint32_t>::max();

// Both rows as covering constraints over non-negative gains:
//   sum gain_up[j] >= need_up   and   sum gain_down[j] >= need_down
// with variables indexed by their position in the branching order.
class CoverSearch {
public:
    CoverSearch(const RejectionIlp& ilp, const SolverLimits& limits) : limits_(limits) {
        need_up_ = -(ilp.slack_up + ilp.tolerance);
        need_down_ = ilp.slack_down - ilp.tolerance;
        round_up_ = 1e-12 * (1.0 + std::abs(need_up_));
        round_down_ = 1e-12 * (1.0 + std::abs(need_down_));

        for (std::size_t j = 0; j < ilp.size(); ++j) {
            const double gu = -ilp.correction_up[j];
            const double gd = ilp.correction_down[j];
            if (gu > 0.0 || gd > 0.0) order_.push_back(j);
        }
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            const double ka = std::min(-ilp.correction_up[a], ilp.correction_down[a]);
            const double kb = std::min(-ilp.correction_up[b], ilp.correction_down[b]);
            if (ka != kb) return ka > kb;
            return a < b;
        });
        const std::size_t m = order_.size();
        gain_up_.resize(m);
        gain_down_.resize(m);
        for (std::size_t p = 0; p < m; ++p) {
            gain_up_[p] = std::max(0.0, -ilp.correction_up[order_[p]]);
            gain_down_[p] = std::max(0.0, ilp.correction_down[order_[p]]);
        }
        by_up_ = sorted_positions(gain_up_);
        by_down_ = sorted_positions(gain_down_);
    }

    IlpSolution run() {
        const auto start = std::chrono::steady_clock::now();
        IlpSolution out = search(start);
        out.solve_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - start);
        return out;
    }

private:
    struct Node {
        double res_up;
        double res_down;
        double weight;  // row weighting that last certified the bound
        std::int64_t parent;
        std::uint32_t depth;  // positions [0, depth) are decided
        std::uint32_t count;
        std::uint32_t bound;
        bool included;
    };

    struct QueueEntry {
        std::uint32_t bound;
        std::uint32_t depth;
        std::int64_t id;
    };

    // Lowest bound first, then deepest, then oldest.
    struct QueueOrder {
        bool operator()(const QueueEntry& a, const QueueEntry& b) const {
            if (a.bound != b.bound) return a.bound > b.bound;
            if (a.depth != b.depth) return a.depth < b.depth;
            return a.id > b.id;
        }
    };

    static std::vector<std::uint32_t> sorted_positions(const std::vector<double>& gains) {
        std::vector<std::uint32_t> pos(gains.size());
        std::iota(pos.begin(), pos.end(), 0u);
        std::stable_sort(pos.begin(), pos.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return gains[a] > gains[b]; });
        return pos;
    }

    // Fewest undecided variables whose gains can cover `residual`. Admissible:
    // no selection of fewer undecided variables reaches the residual.
    std::uint32_t cover_count(double residual, double rounding, std::uint32_t depth,
                              const std::vector<std::uint32_t>& by_gain,
                              const std::vector<double>& gains) const {
        if (residual <= 0.0) return 0;
        double acc = 0.0;
        std::uint32_t used = 0;
        for (std::uint32_t p : by_gain) {
            if (p < depth) continue;
            if (gains[p] <= 0.0) break;
            acc += gains[p];
            ++used;
            if (acc >= residual - rounding) return used;
        }
        return kInfeasible;
    }

    // Splits undecided variables into those helping only the upper row,
    // only the lower row, or both. Taking t of the shared ones at best adds
    // their t largest gains to each row independently; the one-sided rows
    // are then covered greedily. The minimum over t is admissible and exact
    // when nothing is shared.
    std::uint32_t split_count(double res_up, double res_down, std::uint32_t depth) const {
        auto& only_up = split_scratch_[0];
        auto& only_down = split_scratch_[1];
        auto& shared_up = split_scratch_[2];
        auto& shared_down = split_scratch_[3];
        for (auto* v : {&only_up, &only_down, &shared_up, &shared_down}) v->assign(1, 0.0);
        for (std::uint32_t p : by_up_) {
            if (p < depth || gain_up_[p] <= 0.0) continue;
            auto& dst = gain_down_[p] > 0.0 ? shared_up : only_up;
            dst.push_back(dst.back() + gain_up_[p]);
        }
        for (std::uint32_t p : by_down_) {
            if (p < depth || gain_down_[p] <= 0.0) continue;
            auto& dst = gain_up_[p] > 0.0 ? shared_down : only_down;
            dst.push_back(dst.back() + gain_down_[p]);
        }
        // Prefix sums are ascending, so the count needed for a residual only
        // shrinks as t grows.
        std::size_t ku = only_up.size() - 1;
        std::size_t kd = only_down.size() - 1;
        std::uint32_t best = kInfeasible;
        for (std::size_t t = 0; t < shared_up.size(); ++t) {
            const double ru = res_up - shared_up[t];
            const double rd = res_down - shared_down[t];
            if (ru > 0.0 && only_up.back() < ru - round_up_) continue;
            if (rd > 0.0 && only_down.back() < rd - round_down_) continue;
            while (ku > 0 && (ru <= 0.0 || only_up[ku - 1] >= ru - round_up_)) --ku;
            while (kd > 0 && (rd <= 0.0 || only_down[kd - 1] >= rd - round_down_)) --kd;
            best = std::min(best, static_cast<std::uint32_t>(t + ku + kd));
        }
        return best;
    }

    struct Bound {
        std::uint32_t value;
        double weight;
    };

    // Fractional relaxation of the remaining problem, weighted: the best
    // `k` undecided variables under weight*gain_up + (1-weight)*gain_down
    // must reach weight*res_up + (1-weight)*res_down. Returns the shortfall
    // (negative means k variables cannot cover both rows) and its slope in
    // `weight`.
    std::pair<double, double> surrogate_gap(double res_up, double res_down, std::uint32_t depth, std::uint32_t k,
                                            double weight) const {
        const std::uint32_t m = static_cast<std::uint32_t>(order_.size());
        const std::uint32_t free = m - depth;
        scratch_.clear();
        for (std::uint32_t p = depth; p < m; ++p) {
            scratch_.push_back({weight * gain_up_[p] + (1.0 - weight) * gain_down_[p], p});
        }
        std::uint32_t take = std::min(k, free);
        if (take < free) {
            std::nth_element(scratch_.begin(), scratch_.begin() + take, scratch_.end(),
                             [](const auto& x, const auto& y) { return x.first > y.first; });
        }
        double total = 0.0;
        double slope = 0.0;
        for (std::uint32_t i = 0; i < take; ++i) {
            total += scratch_[i].first;
            slope += gain_up_[scratch_[i].second] - gain_down_[scratch_[i].second];
        }
        const double target = weight * res_up + (1.0 - weight) * res_down;
        return {total - target, slope - (res_up - res_down)};
    }

    // True when some weighting proves that k undecided variables are too
    // few. `weight` carries a warm start in and the best witness out.
    bool surrogate_excludes(double res_up, double res_down, std::uint32_t depth, std::uint32_t k,
                            double& weight) const {
        const double tol = round_up_ + round_down_;
        auto [gap, slope] = surrogate_gap(res_up, res_down, depth, k, weight);
        if (gap < -tol) return true;
        // The gap is convex in the weighting; bisect on the sign of its slope.
        double lo = 0.0;
        double hi = 1.0;
        if (slope > 0.0) {
            hi = weight;
        } else if (slope < 0.0) {
            lo = weight;
        } else {
            return false;
        }
        for (int it = 0; it < 40 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto [g, sl] = surrogate_gap(res_up, res_down, depth, k, mid);
            if (g < -tol) {
                weight = mid;
                return true;
            }
            if (sl > 0.0) {
                hi = mid;
            } else if (sl < 0.0) {
                lo = mid;
            } else {
                break;
            }
        }
        for (double w : {lo, hi}) {
            if (surrogate_gap(res_up, res_down, depth, k, w).first < -tol) {
                weight = w;
                return true;
            }
        }
        return false;
    }

    // count + max of both single-row cover counts and the split count,
    // raised further by the weighted relaxation. The relaxation is not pushed past `cutoff`,
    // which is all pruning needs.
    Bound bound_for(double res_up, double res_down, std::uint32_t depth, std::uint32_t count, double weight,
                    std::uint32_t cutoff) const {
        const std::uint32_t ku = cover_count(res_up, round_up_, depth, by_up_, gain_up_);
        if (ku == kInfeasible) return {kInfeasible, weight};
        const std::uint32_t kd = cover_count(res_down, round_down_, depth, by_down_, gain_down_);
        if (kd == kInfeasible) return {kInfeasible, weight};
        std::uint32_t k = std::max(ku, kd);
        if (res_up > 0.0 && res_down > 0.0) {
            const std::uint32_t ks = split_count(res_up, res_down, depth);
            if (ks == kInfeasible) return {kInfeasible, weight};
            k = std::max(k, ks);
            while (count + k < cutoff && surrogate_excludes(res_up, res_down, depth, k, weight)) ++k;
        }
        return {count + k, weight};
    }

    // Picks positions in `sequence` order, skipping ones that help neither
    // still-open row, until both rows are covered.
    std::vector<std::uint32_t> fill_in_order(const std::vector<std::uint32_t>& sequence,
                                             std::vector<std::uint32_t> taken) const {
        std::vector<char> used(order_.size(), 0);
        double ru = need_up_;
        double rd = need_down_;
        for (std::uint32_t p : taken) {
            used[p] = 1;
            ru -= gain_up_[p];
            rd -= gain_down_[p];
        }
        for (std::uint32_t p : sequence) {
            if (ru <= 0.0 && rd <= 0.0) break;
            if (used[p]) continue;
            const bool helps = (ru > 0.0 && gain_up_[p] > 0.0) || (rd > 0.0 && gain_down_[p] > 0.0);
            if (!helps) continue;
            used[p] = 1;
            taken.push_back(p);
            ru -= gain_up_[p];
            rd -= gain_down_[p];
        }
        return taken;
    }

    // Repeatedly takes the variable that closes the largest share of the
    // open deficits, each row normalized by what it still needs.
    std::vector<std::uint32_t> deficit_greedy() const {
        const auto m = static_cast<std::uint32_t>(order_.size());
        std::vector<char> used(m, 0);
        std::vector<std::uint32_t> taken;
        double ru = need_up_;
        double rd = need_down_;
        while ((ru > 0.0 || rd > 0.0) && taken.size() < m) {
            double best_score = 0.0;
            std::uint32_t pick = m;
            for (std::uint32_t p = 0; p < m; ++p) {
                if (used[p]) continue;
                double score = 0.0;
                if (ru > 0.0) score += std::min(gain_up_[p], ru) / ru;
                if (rd > 0.0) score += std::min(gain_down_[p], rd) / rd;
                if (score > best_score) {
                    best_score = score;
                    pick = p;
                }
            }
            if (pick == m) break;
            used[pick] = 1;
            taken.push_back(pick);
            ru -= gain_up_[pick];
            rd -= gain_down_[pick];
        }
        return taken;
    }

    bool covers(double up, double down) const { return need_up_ - up <= 0.0 && need_down_ - down <= 0.0; }

    // Local search on a feasible selection: drop variables that are not
    // needed, and replace any two selected variables by one unselected.
    std::vector<std::uint32_t> shrink(std::vector<std::uint32_t> sel) const {
        const auto m = static_cast<std::uint32_t>(order_.size());
        for (bool changed = true; changed;) {
            changed = false;
            double up = 0.0, down = 0.0;
            for (std::uint32_t p : sel) {
                up += gain_up_[p];
                down += gain_down_[p];
            }
            for (std::size_t i = 0; i < sel.size(); ++i) {
                if (covers(up - gain_up_[sel[i]], down - gain_down_[sel[i]])) {
                    up -= gain_up_[sel[i]];
                    down -= gain_down_[sel[i]];
                    sel.erase(sel.begin() + static_cast<long>(i));
                    --i;
                }
            }

            // Unselected variables by descending gain_up, with the running
            // best gain_down, answer "largest gain_down among gain_up >= x".
            std::vector<char> in(m, 0);
            for (std::uint32_t p : sel) in[p] = 1;
            std::vector<std::uint32_t> outside;
            for (std::uint32_t p : by_up_) {
                if (!in[p]) outside.push_back(p);
            }
            std::vector<std::uint32_t> best_down(outside.size());
            for (std::size_t i = 0; i < outside.size(); ++i) {
                best_down[i] = i > 0 && gain_down_[best_down[i - 1]] >= gain_down_[outside[i]] ? best_down[i - 1]
                                                                                            : outside[i];
            }
            for (std::size_t i = 0; i < sel.size() && !changed; ++i) {
                for (std::size_t j = i + 1; j < sel.size() && !changed; ++j) {
                    const double u = up - gain_up_[sel[i]] - gain_up_[sel[j]];
                    const double d = down - gain_down_[sel[i]] - gain_down_[sel[j]];
                    const double need_u = need_up_ - u;
                    // Count of outside variables with gain_up >= need_u.
                    const auto reach = std::partition_point(outside.begin(), outside.end(), [&](std::uint32_t p) {
                                           return gain_up_[p] >= need_u;
                                       }) - outside.begin();
                    if (reach == 0) continue;
                    const std::uint32_t cand = best_down[static_cast<std::size_t>(reach - 1)];
                    if (covers(u + gain_up_[cand], d + gain_down_[cand])) {
                        sel[i] = cand;
                        sel.erase(sel.begin() + static_cast<long>(j));
                        changed = true;
                    }
                }
            }
        }
        return sel;
    }

    std::vector<std::uint32_t> initial_incumbent(double root_weight) const {
        std::vector<std::uint32_t> in_order(order_.size());
        std::iota(in_order.begin(), in_order.end(), 0u);
        std::vector<std::uint32_t> best = fill_in_order(in_order, {});
        const auto consider = [&](std::vector<std::uint32_t> candidate) {
            if (candidate.size() < best.size()) best = std::move(candidate);
        };
        for (const auto* first : {&by_up_, &by_down_}) {
            const auto* second = first == &by_up_ ? &by_down_ : &by_up_;
            // Cover one row greedily, then finish the other.
            std::vector<std::uint32_t> part;
            double r = first == &by_up_ ? need_up_ : need_down_;
            const auto& g = first == &by_up_ ? gain_up_ : gain_down_;
            for (std::uint32_t p : *first) {
                if (r <= 0.0) break;
                part.push_back(p);
                r -= g[p];
            }
            consider(fill_in_order(*second, std::move(part)));
        }
        consider(deficit_greedy());
        // Orders by weighted gains around the weighting that certified the root bound.
        std::vector<double> key(order_.size());
        for (int step = -8; step <= 8; ++step) {
            const double w = std::clamp(root_weight + step / 64.0, 0.0, 1.0);
            for (std::size_t p = 0; p < key.size(); ++p) key[p] = w * gain_up_[p] + (1.0 - w) * gain_down_[p];
            std::vector<std::uint32_t> seq = in_order;
            std::stable_sort(seq.begin(), seq.end(), [&](std::uint32_t a, std::uint32_t b) { return key[a] > key[b]; });
            consider(fill_in_order(seq, {}));
        }
        return shrink(std::move(best));
    }

    IlpSolution finish(std::vector<std::uint32_t> positions, bool optimal, std::uint64_t nodes) const {
        IlpSolution out;
        out.selected.reserve(positions.size());
        for (std::uint32_t p : positions) out.selected.push_back(order_[p]);
        std::sort(out.selected.begin(), out.selected.end());
        out.objective = out.selected.size();
        out.optimal = optimal;
        out.nodes_explored = nodes;
        return out;
    }

    IlpSolution search(std::chrono::steady_clock::time_point start) {
        if (need_up_ <= 0.0 && need_down_ <= 0.0) return finish({}, true, 0);

        const auto m = static_cast<std::uint32_t>(order_.size());
        const Bound root = bound_for(need_up_, need_down_, 0, 0, 0.5, m + 1);
        std::vector<std::uint32_t> incumbent = initial_incumbent(root.weight);
        std::uint32_t best = static_cast<std::uint32_t>(incumbent.size());

        std::vector<Node> nodes;
        std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> open;
        std::int64_t best_node = -1;

        const std::uint32_t root_bound = root.value;
        if (root_bound == kInfeasible) {
            // Only reachable through rounding: the full set is feasible in exact arithmetic.
            std::vector<std::uint32_t> all(m);
            std::iota(all.begin(), all.end(), 0u);
            return finish(std::move(all), false, 0);
        }
        nodes.push_back(Node{need_up_, need_down_, root.weight, -1, 0, 0, root_bound, false});
        open.push({root_bound, 0, 0});

        std::uint64_t explored = 0;
        bool proven = false;
        while (true) {
            if (open.empty()) {
                proven = true;
                break;
            }
            const QueueEntry top = open.top();
            if (top.bound >= best) {
                proven = true;
                break;
            }
            if (explored >= limits_.node_limit) break;
            if ((explored & 0xFF) == 0 && std::chrono::steady_clock::now() - start > limits_.time_limit) {
                break;
            }
            open.pop();
            ++explored;

            const Node node = nodes[static_cast<std::size_t>(top.id)];
            if (node.depth >= m) continue;
            const std::uint32_t p = node.depth;
            const std::uint32_t next = node.depth + 1;

            // Include position p.
            {
                const double ru = node.res_up - gain_up_[p];
                const double rd = node.res_down - gain_down_[p];
                const std::uint32_t count = node.count + 1;
                if (ru <= 0.0 && rd <= 0.0) {
                    if (count < best) {
                        nodes.push_back(Node{ru, rd, node.weight, top.id, next, count, count, true});
                        best = count;
                        best_node = static_cast<std::int64_t>(nodes.size() - 1);
                    }
                } else {
                    const Bound b = bound_for(ru, rd, next, count, node.weight, best);
                    if (b.value < best) {
                        nodes.push_back(Node{ru, rd, b.weight, top.id, next, count, b.value, true});
                        open.push({b.value, next, static_cast<std::int64_t>(nodes.size() - 1)});
                    }
                }
            }
            // Exclude position p.
            {
                const Bound b = bound_for(node.res_up, node.res_down, next, node.count, node.weight, best);
                if (b.value < best) {
                    nodes.push_back(Node{node.res_up, node.res_down, b.weight, top.id, next, node.count, b.value,
                                         false});
                    open.push({b.value, next, static_cast<std::int64_t>(nodes.size() - 1)});
                }
            }
        }

        if (best_node >= 0) {
            incumbent.clear();
            for (std::int64_t id = best_node; id > 0; id = nodes[static_cast<std::size_t>(id)].parent) {
                const Node& n = nodes[static_cast<std::size_t>(id)];
                if (n.included) incumbent.push_back(n.depth - 1);
            }
        }
        return finish(std::move(incumbent), proven, explored);
    }

    SolverLimits limits_;
    double need_up_ = 0.0;
    double need_down_ = 0.0;
    double round_up_ = 0.0;
    double round_down_ = 0.0;
    std::vector<std::size_t> order_;  // position -> original feature index
    std::vector<double> gain_up_;
    std::vector<double> gain_down_;
    std::vector<std::uint32_t> by_up_;
    std::vector<std::uint32_t> by_down_;
    mutable std::vector<std::pair<double, std::uint32_t>> scratch_;
    mutable std::vector<double> split_scratch_[4];
};

}  // namespace

IlpSolution solve_rejection_ilp(const RejectionIlp& ilp, const SolverLimits& limits) {
    if (ilp.correction_up.size() != ilp.correction_down.size()) {
        throw std::invalid_argument("constraint rows differ in length");
    }
    for (std::size_t j = 0; j < ilp.size(); ++j) {
        if (!std::isfinite(ilp.correction_up[j]) || !std::isfinite(ilp.correction_down[j])) {
            throw std::invalid_argument("non-finite correction coefficient");
        }
    }
    return CoverSearch(ilp, limits).run();
}

RejectionResult explain_rejection(const RejectClassifier& clf, const Instance& instance,
                                  const SolverLimits& limits) {
    const RejectionIlp ilp = build_rejection_ilp(clf, instance);
    IlpSolution solution = solve_rejection_ilp(ilp, limits);
    if (!ilp.feasible(solution.selected)) {
        // Rounding disagreement between the search and the row check; fall
        // back to the full set, which keeps the score at s(x).
        solution.selected.resize(ilp.size());
        std::iota(solution.selected.begin(), solution.selected.end(), std::size_t{0});
        solution.objective = solution.selected.size();
        solution.optimal = false;
    }
    Explanation e = make_explanation(solution.selected, ExplanationKind::Rejection, solution.optimal,
                                     clf.num_features());
    return RejectionResult{std::move(e), std::move(solution)};
}

}  // namespace minabro
