#include "nids/ensemble.hpp"

#include <algorithm>

#include "nids/errors.hpp"
#include "nids/rng.hpp"

namespace nids {

const char* fusion_rule_name(FusionRule rule) {
    switch (rule) {
        case FusionRule::AnomalyUnion: return "anomaly-union";
        case FusionRule::MajorityVote: return "majority-vote";
        case FusionRule::AverageProbability: return "average-probability";
    }
    return "?";
}

FusionRule parse_fusion_rule(const std::string& name) {
    if (name == "anomaly-union" || name == "union") return FusionRule::AnomalyUnion;
    if (name == "majority-vote" || name == "majority") return FusionRule::MajorityVote;
    if (name == "average-probability" || name == "average") {
        return FusionRule::AverageProbability;
    }
    throw UsageError("unknown fusion rule '" + name + "'");
}

CombinedModel train_combined(const Dataset& ds, const CombinedConfig& cfg) {
    if (ds.records.empty()) throw DataError("cannot train on an empty dataset");
    if (ds.schema.class_count() != 2) {
        throw DataError("the combined detector requires binary labels");
    }

    CombinedModel model;
    model.fusion = cfg.fusion;
    model.class_labels = ds.schema.class_values();
    const int anomaly = ds.schema.class_index("anomaly");
    model.anomaly_index = anomaly >= 0 ? anomaly : 1;

    // stage 1: discretized network via K2, junction tree for inference
    model.discretizer =
        fit_discretizer(ds, numeric_feature_indices(ds.schema), cfg.disc_method, cfg.bins);
    const Dataset discrete = apply_discretizer(model.discretizer, ds);
    const NetworkStructure structure =
        k2_search(discrete, class_first_ordering(discrete.schema.feature_count()),
                  cfg.max_parents, cfg.alpha);
    model.bn = fit_cpts(discrete, structure, cfg.alpha);
    model.jtree = build_junction_tree(structure);

    // stages 2 and 3: trees on the raw records, seeds derived from master
    TreeConfig tree_cfg = cfg.tree;
    tree_cfg.seed = mix_seed(cfg.seed, 1);
    model.rtree = train_random_tree(ds, tree_cfg);

    ForestConfig forest_cfg = cfg.forest;
    forest_cfg.seed = mix_seed(cfg.seed, 2);
    model.rforest = train_random_forest(ds, forest_cfg);
    return model;
}

CombinedPrediction predict_combined(const CombinedModel& model, const Record& record) {
    CombinedPrediction out;
    out.member[0] = predict_bn(model.bn, model.jtree,
                               discretize_record(model.discretizer, record));
    out.member[1] = predict_tree(*model.rtree, record);
    out.member[2] = predict_forest(model.rforest, record);

    const std::size_t classes = model.class_labels.size();
    const int anomaly = model.anomaly_index;
    switch (model.fusion) {
        case FusionRule::AnomalyUnion: {
            bool any_anomaly = false;
            for (const auto& dist : out.member) any_anomaly |= dist.argmax() == anomaly;
            out.label = any_anomaly ? anomaly : 1 - anomaly;
            out.fused = ClassDistribution::one_hot(classes, out.label);
            break;
        }
        case FusionRule::MajorityVote: {
            std::vector<int> votes(classes, 0);
            for (const auto& dist : out.member) votes[dist.argmax()]++;
            int best = 0;
            for (std::size_t c = 1; c < classes; ++c) {
                if (votes[c] > votes[best]) best = static_cast<int>(c);
            }
            bool tied = false;
            for (std::size_t c = 0; c < classes; ++c) {
                if (static_cast<int>(c) != best && votes[c] == votes[best]) tied = true;
            }
            out.label = tied ? anomaly : best;  // fail-safe tie rule
            out.fused = ClassDistribution::one_hot(classes, out.label);
            break;
        }
        case FusionRule::AverageProbability: {
            out.fused = ClassDistribution(classes);
            for (const auto& dist : out.member) {
                for (std::size_t c = 0; c < classes; ++c) out.fused[c] += dist[c] / 3.0;
            }
            out.label = out.fused.argmax();
            break;
        }
    }
    return out;
}

EvalReport evaluate_combined(const CombinedModel& model, const Dataset& test, RocCurve* roc) {
    if (test.records.empty()) throw DataError("cannot evaluate on an empty dataset");
    const int anomaly = model.anomaly_index;

    std::vector<Prediction> predictions;
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::pair<double, bool>> scored;
    std::uint64_t fused_detections = 0, fused_false_alarms = 0;
    std::array<std::uint64_t, 3> member_detections{}, member_false_alarms{};

    for (const auto& rec : test.records) {
        CombinedPrediction p = predict_combined(model, rec);
        predictions.push_back({rec.label, p.fused});
        pairs.push_back({rec.label, p.label});

        double mean_anomaly = 0.0;
        for (std::size_t m = 0; m < 3; ++m) {
            mean_anomaly += p.member[m][anomaly] / 3.0;
            const bool flags = p.member[m].argmax() == anomaly;
            if (flags && rec.label == anomaly) member_detections[m]++;
            if (flags && rec.label != anomaly) member_false_alarms[m]++;
        }
        if (p.label == anomaly && rec.label == anomaly) fused_detections++;
        if (p.label == anomaly && rec.label != anomaly) fused_false_alarms++;
        scored.push_back({mean_anomaly, rec.label == anomaly});
    }

    if (model.fusion == FusionRule::AnomalyUnion) {
        // union dominance: the fused detector flags a superset of every
        // member's anomaly calls, on both hits and false alarms
        for (std::size_t m = 0; m < 3; ++m) {
            if (fused_detections < member_detections[m] ||
                fused_false_alarms < member_false_alarms[m]) {
                throw std::logic_error("anomaly-union dominance violated");
            }
        }
    }

    EvalReport report = metrics(confusion(pairs, model.class_labels), predictions);
    if (roc) *roc = roc_points(scored);
    return report;
}

}  // namespace nids
