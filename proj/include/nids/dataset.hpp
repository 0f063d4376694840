#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nids/schema.hpp"

namespace nids {

/// One connection record. Numeric features hold their value directly;
/// nominal features hold the index into the schema's value set.
struct Record {
    std::vector<double> values;
    int label = 0;
};

struct Dataset {
    FeatureSchema schema;
    std::vector<Record> records;

    std::size_t size() const { return records.size(); }

    /// Checks every record against the schema (arity, nominal bounds,
    /// label range). Throws DataError on the first violation.
    void validate() const;
};

/// Parses a headerless CSV of connection records against the given schema.
/// Rows carry feature_count + 1 fields (features + label); when the schema
/// has a difficulty column, feature_count + 2 is also accepted and the
/// trailing score is discarded. Errors carry 1-based line numbers.
Dataset load_csv(const std::string& path, const FeatureSchema& schema,
                 LabelMode mode = LabelMode::Direct);

/// Writes a dataset back out in the same CSV dialect (no difficulty column).
void save_csv(const Dataset& ds, const std::string& path);

/// Parses the ARFF subset: case-insensitive @relation/@attribute/@data,
/// % comment lines, numeric/real/integer or {a,b,c} attribute kinds, last
/// attribute nominal and used as the class. No sparse rows, no quoting.
Dataset load_arff(const std::string& path);

/// Stratified fold assignment: per-class fold sizes differ by at most 1.
struct FoldPlan {
    std::vector<int> assignments;  // per record, in [0, k)
    int k = 0;
    std::uint64_t seed = 0;
};

/// Groups records per class, shuffles each group with a seeded generator
/// and deals round-robin, carrying the dealing offset across classes so
/// total fold sizes also stay within 1.
FoldPlan stratified_folds(const Dataset& ds, int k, std::uint64_t seed);

/// Without-replacement sample of round(fraction * N) records, preserving
/// dataset order. Stratified sampling rounds per class instead.
Dataset sample_fraction(const Dataset& ds, double fraction, std::uint64_t seed,
                        bool stratified);

}  // namespace nids
