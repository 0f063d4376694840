#include "nids/naive_bayes.hpp"

#include <cmath>
#include <limits>

#include "nids/errors.hpp"

namespace nids {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2*pi)

void check_record(const NBModel& model, const Record& record) {
    if (record.values.size() != model.feature_count) {
        throw DataError("record has " + std::to_string(record.values.size()) +
                        " values, model expects " + std::to_string(model.feature_count));
    }
    for (std::size_t f = 0; f < model.feature_count; ++f) {
        const std::size_t card = model.nominal_cardinality[f];
        if (card == 0) continue;
        const double v = record.values[f];
        if (v < 0 || v >= static_cast<double>(card) || v != std::floor(v)) {
            throw DataError("nominal value out of range for feature " + std::to_string(f));
        }
    }
}

}  // namespace

NBModel train_nb(const Dataset& ds, double smoothing, double sd_floor) {
    if (ds.records.empty()) throw DataError("cannot train on an empty dataset");
    if (smoothing < 0) throw UsageError("smoothing must be non-negative");
    if (!(sd_floor > 0)) throw UsageError("sd floor must be positive");

    const std::size_t classes = ds.schema.class_count();
    const std::size_t features = ds.schema.feature_count();
    const double n = static_cast<double>(ds.size());

    NBModel model;
    model.smoothing = smoothing;
    model.sd_floor = sd_floor;
    model.class_count = classes;
    model.feature_count = features;
    model.schema_fingerprint = ds.schema.fingerprint();
    model.nominal_tables.resize(features);
    model.nominal_cardinality.assign(features, 0);
    model.numeric_params.resize(features);

    std::vector<double> class_n(classes, 0.0);
    for (const auto& rec : ds.records) class_n[rec.label] += 1.0;

    model.class_priors.resize(classes);
    for (std::size_t c = 0; c < classes; ++c) {
        model.class_priors[c] =
            (class_n[c] + smoothing) / (n + smoothing * static_cast<double>(classes));
    }

    for (std::size_t f = 0; f < features; ++f) {
        const FeatureInfo& info = ds.schema.feature(f);
        if (info.kind == FeatureKind::Nominal) {
            const std::size_t card = info.values.size();
            model.nominal_cardinality[f] = card;
            std::vector<double> counts(classes * card, 0.0);
            for (const auto& rec : ds.records) {
                counts[rec.label * card + static_cast<std::size_t>(rec.values[f])] += 1.0;
            }
            auto& table = model.nominal_tables[f];
            table.resize(classes * card);
            for (std::size_t c = 0; c < classes; ++c) {
                const double denom = class_n[c] + smoothing * static_cast<double>(card);
                for (std::size_t v = 0; v < card; ++v) {
                    table[c * card + v] =
                        denom > 0 ? (counts[c * card + v] + smoothing) / denom
                                  : 1.0 / static_cast<double>(card);
                }
            }
        } else {
            // per-class Gaussian; classes without records fall back to the
            // overall feature statistics
            std::vector<double> sum(classes, 0.0), sumsq(classes, 0.0);
            double all_sum = 0.0, all_sumsq = 0.0;
            for (const auto& rec : ds.records) {
                const double v = rec.values[f];
                sum[rec.label] += v;
                sumsq[rec.label] += v * v;
                all_sum += v;
                all_sumsq += v * v;
            }
            const double all_mean = all_sum / n;
            const double all_var = std::max(0.0, all_sumsq / n - all_mean * all_mean);
            auto& params = model.numeric_params[f];
            params.resize(classes);
            for (std::size_t c = 0; c < classes; ++c) {
                if (class_n[c] > 0) {
                    const double mean = sum[c] / class_n[c];
                    const double var = std::max(0.0, sumsq[c] / class_n[c] - mean * mean);
                    params[c] = {mean, std::max(sd_floor, std::sqrt(var))};
                } else {
                    params[c] = {all_mean, std::max(sd_floor, std::sqrt(all_var))};
                }
            }
        }
    }
    return model;
}

double log_posterior(const NBModel& model, const Record& record, std::size_t class_index) {
    if (class_index >= model.class_count) throw DataError("class index out of range");
    check_record(model, record);

    double lp = std::log(model.class_priors[class_index]);
    for (std::size_t f = 0; f < model.feature_count; ++f) {
        const std::size_t card = model.nominal_cardinality[f];
        if (card > 0) {
            const double p =
                model.nominal_tables[f][class_index * card +
                                        static_cast<std::size_t>(record.values[f])];
            lp += p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
        } else {
            const auto& g = model.numeric_params[f][class_index];
            const double z = (record.values[f] - g.mean) / g.sd;
            lp += -kHalfLog2Pi - std::log(g.sd) - 0.5 * z * z;
        }
    }
    return lp;
}

ClassDistribution predict_nb(const NBModel& model, const Record& record) {
    ClassDistribution dist(model.class_count);
    double max_lp = -std::numeric_limits<double>::infinity();
    std::vector<double> lps(model.class_count);
    for (std::size_t c = 0; c < model.class_count; ++c) {
        lps[c] = log_posterior(model, record, c);
        max_lp = std::max(max_lp, lps[c]);
    }
    if (!std::isfinite(max_lp)) {
        // every class has zero likelihood; fall back to uniform
        dist.normalize();
        return dist;
    }
    for (std::size_t c = 0; c < model.class_count; ++c) {
        dist[c] = std::exp(lps[c] - max_lp);
    }
    dist.normalize();
    return dist;
}

}  // namespace nids
