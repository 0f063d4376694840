#include "nids/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "nids/errors.hpp"

namespace nids {

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts) {
        for (std::uint64_t c : row) t += c;
    }
    return t;
}

std::uint64_t ConfusionMatrix::correct() const {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

ConfusionMatrix confusion(const std::vector<std::pair<int, int>>& actual_predicted,
                          std::vector<std::string> labels) {
    ConfusionMatrix cm;
    const std::size_t n = labels.size();
    cm.labels = std::move(labels);
    cm.counts.assign(n, std::vector<std::uint64_t>(n, 0));
    for (const auto& [actual, predicted] : actual_predicted) {
        if (actual < 0 || static_cast<std::size_t>(actual) >= n || predicted < 0 ||
            static_cast<std::size_t>(predicted) >= n) {
            throw DataError("class index out of range in confusion tabulation");
        }
        cm.counts[actual][predicted]++;
    }
    return cm;
}

EvalReport metrics(const ConfusionMatrix& cm, const std::vector<Prediction>& predictions) {
    const std::uint64_t total = cm.total();
    if (total == 0) throw DataError("cannot compute metrics over an empty confusion matrix");
    if (predictions.size() != total) {
        throw DataError("prediction list does not match the confusion matrix total");
    }
    const std::size_t classes = cm.counts.size();

    EvalReport report;
    report.confusion = cm;
    report.accuracy = static_cast<double>(cm.correct()) / static_cast<double>(total);

    std::vector<std::uint64_t> row_sum(classes, 0), col_sum(classes, 0);
    for (std::size_t a = 0; a < classes; ++a) {
        for (std::size_t p = 0; p < classes; ++p) {
            row_sum[a] += cm.counts[a][p];
            col_sum[p] += cm.counts[a][p];
        }
    }
    for (std::size_t c = 0; c < classes; ++c) {
        const double support = static_cast<double>(row_sum[c]);
        if (support == 0) continue;
        const double weight = support / static_cast<double>(total);
        const double tp = static_cast<double>(cm.counts[c][c]);
        const double fn = support - tp;
        const double fp = static_cast<double>(col_sum[c]) - tp;
        const double tn = static_cast<double>(total) - tp - fn - fp;
        const double tpr = tp / (tp + fn);
        const double fpr = (fp + tn) > 0 ? fp / (fp + tn) : 0.0;
        const double prec = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
        const double f = (prec + tpr) > 0 ? 2.0 * prec * tpr / (prec + tpr) : 0.0;
        report.tp_rate += weight * tpr;
        report.fp_rate += weight * fpr;
        report.precision += weight * prec;
        report.recall += weight * tpr;
        report.f_measure += weight * f;
    }

    double se = 0.0;
    for (const auto& pred : predictions) {
        if (pred.dist.size() != classes) {
            throw DataError("prediction distribution size does not match class count");
        }
        for (std::size_t c = 0; c < classes; ++c) {
            const double y = static_cast<int>(c) == pred.actual ? 1.0 : 0.0;
            const double d = pred.dist[c] - y;
            se += d * d;
        }
    }
    report.rmse = std::sqrt(se / (static_cast<double>(total) * static_cast<double>(classes)));
    return report;
}

RocCurve roc_points(const std::vector<std::pair<double, bool>>& scored) {
    std::uint64_t positives = 0, negatives = 0;
    for (const auto& [score, is_positive] : scored) (is_positive ? positives : negatives)++;
    if (positives == 0 || negatives == 0) {
        throw DataError("ROC needs at least one positive and one negative instance");
    }

    std::vector<std::pair<double, bool>> sorted = scored;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    RocCurve curve;
    curve.points.push_back(
        {0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::uint64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double score = sorted[i].first;
        while (i < sorted.size() && sorted[i].first == score) {
            (sorted[i].second ? tp : fp)++;
            ++i;
        }
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                                static_cast<double>(tp) / static_cast<double>(positives),
                                score});
    }
    double auc = 0.0;
    for (std::size_t p = 1; p < curve.points.size(); ++p) {
        const auto& a = curve.points[p - 1];
        const auto& b = curve.points[p];
        auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

EvalReport cross_validate(const Learner& learner, const Dataset& ds, int folds,
                          std::uint64_t seed, std::vector<Prediction>* out_predictions) {
    const FoldPlan plan = stratified_folds(ds, folds, seed);

    std::vector<Prediction> pooled(ds.size());
    double build_time_total = 0.0;

    for (int f = 0; f < folds; ++f) {
        Dataset train;
        train.schema = ds.schema;
        std::vector<std::size_t> test_indices;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (plan.assignments[i] == f) {
                test_indices.push_back(i);
            } else {
                train.records.push_back(ds.records[i]);
            }
        }
        const auto t0 = std::chrono::steady_clock::now();
        const auto model = learner.train(train);
        build_time_total += std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
        for (std::size_t idx : test_indices) {
            pooled[idx] = {ds.records[idx].label, model->predict(ds.records[idx])};
        }
    }

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(pooled.size());
    for (const auto& p : pooled) pairs.push_back({p.actual, p.predicted()});
    EvalReport report = metrics(confusion(pairs, ds.schema.class_values()), pooled);
    report.build_time_seconds = build_time_total / static_cast<double>(folds);
    if (out_predictions) *out_predictions = std::move(pooled);
    return report;
}

}  // namespace nids
