#include "ouq/pipeline/tree_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "ouq/error.hpp"
#include "ouq/pipeline/kfold.hpp"

namespace ouq {

void LearnerConfig::validate() const {
    if (members < 1) throw ValidationError("ensemble needs at least one member");
    if (max_depth < 0) throw ValidationError("max_depth must be >= 0");
    if (!(subsample > 0.0 && subsample <= 1.0)) throw ValidationError("subsample must lie in (0, 1]");
    if (min_samples_split < 2) throw ValidationError("min_samples_split must be >= 2");
    if (!(smoothing > 0.0) || !std::isfinite(smoothing)) throw ValidationError("smoothing must be positive");
}

namespace {

class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix& x, std::span<const int> y, int k_count, const LearnerConfig& config)
        : x_(x), y_(y), k_(static_cast<std::size_t>(k_count)), config_(config) {}

    TreeEnsemble::Tree build(std::vector<std::size_t> rows) {
        tree_ = {};
        grow(rows, 0);
        return std::move(tree_);
    }

private:
    struct Split {
        std::size_t feature;
        double threshold;
        double score;  // sum over children of (sum_k c_k^2) / n_child; larger is purer
    };

    std::vector<double> class_counts(const std::vector<std::size_t>& rows) const {
        std::vector<double> counts(k_, 0.0);
        for (auto r : rows) counts[static_cast<std::size_t>(y_[r] - 1)] += 1.0;
        return counts;
    }

    std::size_t make_leaf(const std::vector<double>& counts, double n) {
        std::vector<double> probs(k_);
        const double denom = n + config_.smoothing * static_cast<double>(k_);
        for (std::size_t k = 0; k < k_; ++k) probs[k] = (counts[k] + config_.smoothing) / denom;
        tree_.leaves.push_back(ProbabilityVector::renormalized(std::move(probs), 1e-9));
        TreeEnsemble::Node node;
        node.leaf = tree_.leaves.size() - 1;
        tree_.nodes.push_back(node);
        return tree_.nodes.size() - 1;
    }

    std::optional<Split> best_split(const std::vector<std::size_t>& rows, const std::vector<double>& counts) const {
        const double n = static_cast<double>(rows.size());
        double parent = 0.0;
        for (double c : counts) parent += c * c;
        parent /= n;

        std::optional<Split> best;
        std::vector<std::pair<double, int>> column(rows.size());
        std::vector<double> left(k_);
        for (std::size_t f = 0; f < x_.cols; ++f) {
            for (std::size_t i = 0; i < rows.size(); ++i) column[i] = {x_.values[rows[i] * x_.cols + f], y_[rows[i]]};
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;

            std::fill(left.begin(), left.end(), 0.0);
            double left_sq = 0.0;
            double right_sq = 0.0;
            for (double c : counts) right_sq += c * c;
            for (std::size_t i = 0; i + 1 < column.size(); ++i) {
                const auto k = static_cast<std::size_t>(column[i].second - 1);
                const double right_k = counts[k] - left[k];
                left_sq += 2.0 * left[k] + 1.0;
                right_sq -= 2.0 * right_k - 1.0;
                left[k] += 1.0;
                if (column[i].first == column[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double score = left_sq / nl + right_sq / (n - nl);
                if (score > parent + 1e-12 && (!best || score > best->score + 1e-12)) {
                    double threshold = 0.5 * (column[i].first + column[i + 1].first);
                    if (!(threshold < column[i + 1].first)) threshold = column[i].first;
                    best = Split{f, threshold, score};
                }
            }
        }
        return best;
    }

    std::size_t grow(const std::vector<std::size_t>& rows, int depth) {
        const auto counts = class_counts(rows);
        const double n = static_cast<double>(rows.size());
        const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
        if (depth >= config_.max_depth || rows.size() < config_.min_samples_split || pure) {
            return make_leaf(counts, n);
        }
        const auto split = best_split(rows, counts);
        if (!split) return make_leaf(counts, n);

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (auto r : rows) {
            (x_.values[r * x_.cols + split->feature] <= split->threshold ? left_rows : right_rows).push_back(r);
        }
        const std::size_t id = tree_.nodes.size();
        tree_.nodes.emplace_back();
        tree_.nodes[id].feature = static_cast<int>(split->feature);
        tree_.nodes[id].threshold = split->threshold;
        const auto l = grow(left_rows, depth + 1);
        const auto r = grow(right_rows, depth + 1);
        tree_.nodes[id].left = l;
        tree_.nodes[id].right = r;
        return id;
    }

    const FeatureMatrix& x_;
    std::span<const int> y_;
    std::size_t k_;
    const LearnerConfig& config_;
    TreeEnsemble::Tree tree_;
};

} // namespace

TreeEnsemble train_bootstrap_ensemble(const FeatureMatrix& x, std::span<const int> labels, int k_count,
                                      std::uint64_t seed, const LearnerConfig& config) {
    config.validate();
    const ClassScale scale(k_count);
    if (x.rows != labels.size()) throw ValidationError("feature rows and labels differ in length");
    if (x.rows == 0) throw ValidationError("cannot train on an empty split");
    for (int y : labels) {
        if (!scale.contains(y)) throw ValidationError("training label outside 1..K");
    }

    TreeEnsemble model;
    model.k_count_ = k_count;
    model.features_ = x.cols;
    if (std::all_of(labels.begin(), labels.end(), [&](int y) { return y == labels.front(); })) {
        model.warnings_.push_back("training data contains a single class (" + std::to_string(labels.front()) +
                                  "); members are constant predictors");
    }

    const auto draw = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(config.subsample * static_cast<double>(x.rows))));
    TreeBuilder builder(x, labels, k_count, config);
    std::vector<std::size_t> all(x.rows);
    for (std::size_t m = 0; m < config.members; ++m) {
        std::iota(all.begin(), all.end(), std::size_t{0});
        std::mt19937_64 rng(derive_seed(seed, "member", m));
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<std::size_t> rows(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(draw));
        std::sort(rows.begin(), rows.end());
        model.trees_.push_back(builder.build(std::move(rows)));
    }
    return model;
}

EnsemblePrediction TreeEnsemble::predict(std::span<const double> x) const {
    if (x.size() != features_) {
        throw ValidationError("expected " + std::to_string(features_) + " features, got " + std::to_string(x.size()));
    }
    std::vector<ProbabilityVector> members;
    members.reserve(trees_.size());
    for (const auto& tree : trees_) {
        std::size_t node = 0;
        while (tree.nodes[node].feature >= 0) {
            const auto& n = tree.nodes[node];
            node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        members.push_back(tree.leaves[tree.nodes[node].leaf]);
    }
    return EnsemblePrediction(std::move(members));
}

std::vector<EnsemblePrediction> TreeEnsemble::predict(const FeatureMatrix& x) const {
    std::vector<EnsemblePrediction> out;
    out.reserve(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out.push_back(predict(x.row(r)));
    return out;
}

} // namespace ouq
