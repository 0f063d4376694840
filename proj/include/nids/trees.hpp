#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nids/class_distribution.hpp"
#include "nids/dataset.hpp"

namespace nids {

struct TreeConfig {
    int k_features = 0;  // attributes sampled per node; 0 = floor(log2(d)) + 1
    int min_leaf = 1;
    int max_depth = 0;  // 0 = unlimited
    std::uint64_t seed = 0;
};

/// Unpruned decision tree node. A leaf holds the training class counts;
/// an internal node splits on one feature, binary at a threshold for
/// numeric features, one child per value for nominal ones (children for
/// values unseen in the node's training subset stay null and prediction
/// routes them to the heaviest child).
struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    bool is_nominal = false;
    double threshold = 0.0;
    int majority_child = 0;
    std::vector<std::unique_ptr<TreeNode>> children;
    std::vector<std::uint64_t> class_counts;  // leaves only

    bool is_leaf() const { return feature < 0; }
};

struct Split {
    int feature = -1;
    bool is_nominal = false;
    double threshold = 0.0;
    double gain = 0.0;  // information gain in bits, > 0
};

/// Best information-gain split among the candidate features over the given
/// record subset. Numeric thresholds at midpoints of adjacent distinct
/// values, nominal splits multiway. Empty result when no split has
/// positive gain; ties broken by lower feature index, then lower threshold.
std::optional<Split> best_split(const Dataset& ds, const std::vector<std::uint32_t>& subset,
                                const std::vector<int>& candidate_features);

/// Grows an unpruned random tree: k randomly drawn candidate features per
/// node, recursion until pure, below min_leaf, at max_depth or out of
/// positive-gain splits. Deterministic per seed.
std::unique_ptr<TreeNode> train_random_tree(const Dataset& ds, const TreeConfig& cfg);

ClassDistribution predict_tree(const TreeNode& root, const Record& record);

struct ForestConfig {
    int tree_count = 100;
    double bag_fraction = 0.66;  // n/N, in (0, 1]
    int r_features = 0;          // per-node candidates; 0 = auto as above
    bool with_replacement = false;
    int min_leaf = 1;
    std::uint64_t seed = 0;
};

struct ForestModel {
    std::vector<std::unique_ptr<TreeNode>> trees;
    ForestConfig config;
    std::vector<std::string> class_labels;
};

/// Trains tree i on a random sample of round(bag_fraction * N) records
/// (without replacement by default) with per-tree seeds derived from
/// (seed, i), so growing the forest keeps earlier trees unchanged. Trees
/// may train concurrently; the result is ordered by index either way.
ForestModel train_random_forest(const Dataset& ds, const ForestConfig& cfg);

/// Each tree votes for its argmax class; the distribution is the vote
/// fractions and the label the modal vote (ties -> lower class index).
ClassDistribution predict_forest(const ForestModel& model, const Record& record);

/// Effective per-node candidate count for d features (the auto rule).
int auto_k_features(std::size_t feature_count);

}  // namespace nids
