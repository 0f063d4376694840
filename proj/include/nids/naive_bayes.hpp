#pragma once

#include <cstdint>
#include <vector>

#include "nids/class_distribution.hpp"
#include "nids/dataset.hpp"

namespace nids {

/// Naive Bayes parameters: smoothed class priors, per-(feature, class)
/// nominal value probabilities and per-(feature, class) Gaussians for
/// numeric features. All prediction happens in log space.
struct NBModel {
    struct Gaussian {
        double mean = 0.0;
        double sd = 1.0;
    };

    std::vector<double> class_priors;  // sums to 1
    /// nominal features: [feature][class * value_count + value] -> P(value | class)
    std::vector<std::vector<double>> nominal_tables;
    std::vector<std::size_t> nominal_cardinality;  // 0 for numeric features
    /// numeric features: [feature][class] -> Gaussian (empty for nominal)
    std::vector<std::vector<Gaussian>> numeric_params;
    double smoothing = 1.0;
    double sd_floor = 1e-3;
    std::size_t class_count = 0;
    std::size_t feature_count = 0;
    std::uint64_t schema_fingerprint = 0;
};

/// Fits priors (count + a) / (N + a*|C|), Laplace-smoothed nominal tables
/// and per-class Gaussians with the standard deviation floored at sd_floor.
NBModel train_nb(const Dataset& ds, double smoothing = 1.0, double sd_floor = 1e-3);

/// log P(C_j) + sum_k log P(x_k | C_j), unnormalized.
double log_posterior(const NBModel& model, const Record& record, std::size_t class_index);

/// Softmax of the log posteriors (max-subtracted); sums to 1.
ClassDistribution predict_nb(const NBModel& model, const Record& record);

}  // namespace nids
