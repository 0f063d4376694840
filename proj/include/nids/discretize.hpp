#pragma once

#include <cstdint>
#include <vector>

#include "nids/dataset.hpp"

namespace nids {

enum class DiscretizeMethod { EqualWidth, EqualFrequency, EntropyMdl };

const char* discretize_method_name(DiscretizeMethod m);
DiscretizeMethod parse_discretize_method(const std::string& name);

/// Maps numeric features to interval indices. Bin boundaries are
/// left-inclusive: bin(v) = number of cut points <= v, so a value equal to
/// a cut lands in the bin above it, and out-of-range values clamp to the
/// edge bins.
class Discretizer {
public:
    struct FeatureCuts {
        std::size_t feature = 0;
        std::vector<double> cuts;  // strictly increasing; empty -> single bin
    };

    Discretizer() = default;
    Discretizer(std::vector<FeatureCuts> cuts, DiscretizeMethod method, int bin_count,
                std::uint64_t source_fingerprint);

    const std::vector<FeatureCuts>& feature_cuts() const { return cuts_; }
    DiscretizeMethod method() const { return method_; }
    int bin_count() const { return bin_count_; }
    std::uint64_t source_fingerprint() const { return source_fingerprint_; }

    static int bin_of(double value, const std::vector<double>& cuts);

private:
    std::vector<FeatureCuts> cuts_;
    DiscretizeMethod method_ = DiscretizeMethod::EqualWidth;
    int bin_count_ = 10;
    std::uint64_t source_fingerprint_ = 0;
};

/// Learns cut points for the given numeric features.
///   EqualWidth:     bin_count - 1 equally spaced cuts over [min, max].
///   EqualFrequency: cuts at empirical quantiles, duplicates collapsed.
///   EntropyMdl:     supervised recursive binary splits, each accepted only
///                   when its class-entropy gain clears the
///                   minimum-description-length threshold.
Discretizer fit_discretizer(const Dataset& ds, const std::vector<std::size_t>& features,
                            DiscretizeMethod method, int bin_count);

/// Transforms the fitted features into nominal bin_0..bin_m features.
/// Record count is unchanged; non-fitted features pass through.
Dataset apply_discretizer(const Discretizer& disc, const Dataset& ds);

/// Transforms a single record (same rules as apply_discretizer).
Record discretize_record(const Discretizer& disc, const Record& rec);

/// Indices of all numeric features in schema order.
std::vector<std::size_t> numeric_feature_indices(const FeatureSchema& schema);

}  // namespace nids
