#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nids {

enum class FeatureKind { Numeric, Nominal };

struct FeatureInfo {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    std::vector<std::string> values;  // nominal value set, empty for numeric
};

/// How raw CSV labels resolve to class indices.
///  - Direct:    the label must be one of the schema's class values.
///  - Binary:    "normal" -> normal, any attack name -> anomaly.
///  - Category5: attack names map through the four-category taxonomy.
enum class LabelMode { Direct, Binary, Category5 };

/// Attack categories of the connection-record taxonomy.
enum class AttackCategory { Normal, DoS, Probe, R2L, U2R };

/// Maps a raw label to its category. Unknown labels raise DataError,
/// never a silent default.
AttackCategory map_attack_category(std::string_view raw_label);

const char* attack_category_name(AttackCategory c);

/// Ordered feature list plus the class value set of a dataset.
class FeatureSchema {
public:
    FeatureSchema() = default;
    FeatureSchema(std::vector<FeatureInfo> features,
                  std::vector<std::string> class_values,
                  bool has_difficulty_column = false);

    std::size_t feature_count() const { return features_.size(); }
    const FeatureInfo& feature(std::size_t i) const { return features_[i]; }
    const std::vector<FeatureInfo>& features() const { return features_; }
    const std::vector<std::string>& class_values() const { return class_values_; }
    std::size_t class_count() const { return class_values_.size(); }
    bool has_difficulty_column() const { return has_difficulty_column_; }

    /// Index of value in the feature's nominal set, or -1.
    int nominal_index(std::size_t feature, std::string_view value) const;
    /// Index of label in class_values, or -1.
    int class_index(std::string_view label) const;

    /// FNV-1a over feature names, kinds, value sets and class values.
    /// Model files embed this so evaluation can reject mismatched data.
    std::uint64_t fingerprint() const;

    bool operator==(const FeatureSchema& other) const;

private:
    std::vector<FeatureInfo> features_;
    std::vector<std::string> class_values_;
    bool has_difficulty_column_ = false;
};

/// The canonical 41-feature connection-record schema (protocol_type,
/// service and flag nominal; everything else numeric). Binary mode yields
/// class values {normal, anomaly}; Category5 yields the five categories.
FeatureSchema nsl_kdd_schema(LabelMode mode);

}  // namespace nids
