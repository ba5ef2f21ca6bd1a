#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ouq/core/types.hpp"
#include "ouq/pipeline/preprocess.hpp"

namespace ouq {

struct LearnerConfig {
    std::size_t members = 10;
    int max_depth = 6;
    double subsample = 0.5;          // fraction drawn without replacement per member
    std::size_t min_samples_split = 2;
    double smoothing = 1.0;          // additive (Laplace) pseudo-count per class at the leaves

    void validate() const;
};

/// Bagged ensemble of depth-limited CART classifiers (Gini impurity). Each
/// member is fit on its own subsample; leaves hold smoothed class
/// distributions, so every member emits a full probability vector.
class TreeEnsemble {
public:
    EnsemblePrediction predict(std::span<const double> x) const;
    std::vector<EnsemblePrediction> predict(const FeatureMatrix& x) const;

    std::size_t member_count() const noexcept { return trees_.size(); }
    int k_count() const noexcept { return k_count_; }
    std::size_t feature_count() const noexcept { return features_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        std::size_t left = 0;
        std::size_t right = 0;
        std::size_t leaf = 0;  // index into Tree::leaves
    };
    struct Tree {
        std::vector<Node> nodes;
        std::vector<ProbabilityVector> leaves;
    };

    friend TreeEnsemble train_bootstrap_ensemble(const FeatureMatrix&, std::span<const int>, int, std::uint64_t,
                                                 const LearnerConfig&);

private:

    std::vector<Tree> trees_;
    int k_count_ = 0;
    std::size_t features_ = 0;
    std::vector<std::string> warnings_;
};

/// Trains `config.members` trees; member m draws its subsample from a stream
/// derived from (seed, m). Labels are 1..k_count. A single-class training set
/// yields constant members and a warning.
TreeEnsemble train_bootstrap_ensemble(const FeatureMatrix& x, std::span<const int> labels, int k_count,
                                      std::uint64_t seed, const LearnerConfig& config = {});

} // namespace ouq
