#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nids/bayes_net.hpp"
#include "nids/discretize.hpp"
#include "nids/eval.hpp"
#include "nids/junction_tree.hpp"
#include "nids/trees.hpp"

namespace nids {

/// How the three member verdicts combine into one label.
///  - AnomalyUnion:       anomaly iff any member's argmax is anomaly (the
///                        miss-catching cascade; catches the most attacks,
///                        inherits every member's false alarms)
///  - MajorityVote:       modal argmax; a tie (impossible with 3 members
///                        and 2 classes) would resolve to anomaly
///  - AverageProbability: mean of the member distributions, argmax label
enum class FusionRule { AnomalyUnion, MajorityVote, AverageProbability };

const char* fusion_rule_name(FusionRule rule);
FusionRule parse_fusion_rule(const std::string& name);

struct CombinedConfig {
    DiscretizeMethod disc_method = DiscretizeMethod::EqualWidth;
    int bins = 10;
    std::size_t max_parents = 3;  // class parent plus up to two features
    double alpha = 1.0;           // K2 prior and CPT smoothing
    TreeConfig tree;              // seed overridden from `seed`
    ForestConfig forest;          // seed overridden from `seed`
    FusionRule fusion = FusionRule::AnomalyUnion;
    std::uint64_t seed = 0;
};

/// Stage 1 (K2-trained network with junction-tree inference) consumes
/// discretized features; the tree members consume the raw records.
struct CombinedModel {
    Discretizer discretizer;
    BayesNetModel bn;
    JunctionTree jtree;
    std::unique_ptr<TreeNode> rtree;
    ForestModel rforest;
    FusionRule fusion = FusionRule::AnomalyUnion;
    std::vector<std::string> class_labels;
    int anomaly_index = 1;
};

/// Trains the three members on a binary-labeled dataset; deterministic
/// per seed (member seeds derive from it).
CombinedModel train_combined(const Dataset& ds, const CombinedConfig& cfg);

struct CombinedPrediction {
    int label = 0;
    ClassDistribution fused;                  // one-hot for the vote rules
    std::array<ClassDistribution, 3> member;  // bn, rtree, rforest
};

CombinedPrediction predict_combined(const CombinedModel& model, const Record& record);

/// Evaluates on a test set. The ROC, when requested, is always scored by
/// the mean member anomaly probability, whatever the label rule is.
EvalReport evaluate_combined(const CombinedModel& model, const Dataset& test,
                             RocCurve* roc = nullptr);

}  // namespace nids
