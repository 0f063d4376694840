#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nids/class_distribution.hpp"
#include "nids/dataset.hpp"

namespace nids {

struct ConfusionMatrix {
    std::vector<std::vector<std::uint64_t>> counts;  // [actual][predicted]
    std::vector<std::string> labels;

    std::uint64_t total() const;
    std::uint64_t correct() const;  // trace
};

/// The per-run metric set: support-weighted rates over the confusion
/// matrix plus RMSE over class-probability vectors against one-hot truth.
struct EvalReport {
    ConfusionMatrix confusion;
    double accuracy = 0.0;
    double tp_rate = 0.0;
    double fp_rate = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    double rmse = 0.0;
    double build_time_seconds = 0.0;
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // monotone, (0,0) .. (1,1)
    double auc = 0.0;
};

/// One scored instance: actual class plus the predicted distribution.
struct Prediction {
    int actual = 0;
    ClassDistribution dist;

    int predicted() const { return dist.argmax(); }
};

ConfusionMatrix confusion(const std::vector<std::pair<int, int>>& actual_predicted,
                          std::vector<std::string> labels);

/// Computes the full metric set. predictions must match the matrix total;
/// build_time_seconds is left at 0 for the caller to fill.
EvalReport metrics(const ConfusionMatrix& cm, const std::vector<Prediction>& predictions);

/// Threshold sweep over (positive-class score, is-positive) pairs, tied
/// scores processed as one block; AUC by the trapezoid rule.
RocCurve roc_points(const std::vector<std::pair<double, bool>>& scored);

/// A trained classifier: pure prediction over records.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual ClassDistribution predict(const Record& record) const = 0;
};

/// A training configuration. train() owns the whole fitting pipeline,
/// including any discretizer or feature selection, so cross-validation
/// re-fits everything inside each fold.
class Learner {
public:
    virtual ~Learner() = default;
    virtual std::string name() const = 0;
    virtual std::unique_ptr<Classifier> train(const Dataset& ds) const = 0;
};

/// k-fold cross-validation: trains on k-1 folds, predicts the held-out
/// fold, pools all out-of-fold predictions into one report.
/// out_predictions, when given, receives one prediction per record in
/// dataset order. build_time is the mean per-fold training wall time.
EvalReport cross_validate(const Learner& learner, const Dataset& ds, int folds,
                          std::uint64_t seed,
                          std::vector<Prediction>* out_predictions = nullptr);

}  // namespace nids
