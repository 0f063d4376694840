#include "nids/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "nids/errors.hpp"

namespace nids {

const char* discretize_method_name(DiscretizeMethod m) {
    switch (m) {
        case DiscretizeMethod::EqualWidth: return "equal-width";
        case DiscretizeMethod::EqualFrequency: return "equal-frequency";
        case DiscretizeMethod::EntropyMdl: return "entropy-mdl";
    }
    return "?";
}

DiscretizeMethod parse_discretize_method(const std::string& name) {
    if (name == "equal-width" || name == "width") return DiscretizeMethod::EqualWidth;
    if (name == "equal-frequency" || name == "frequency") return DiscretizeMethod::EqualFrequency;
    if (name == "entropy-mdl" || name == "mdl") return DiscretizeMethod::EntropyMdl;
    throw UsageError("unknown discretization method '" + name + "'");
}

Discretizer::Discretizer(std::vector<FeatureCuts> cuts, DiscretizeMethod method,
                         int bin_count, std::uint64_t source_fingerprint)
    : cuts_(std::move(cuts)),
      method_(method),
      bin_count_(bin_count),
      source_fingerprint_(source_fingerprint) {
    for (const auto& fc : cuts_) {
        for (std::size_t i = 1; i < fc.cuts.size(); ++i) {
            if (!(fc.cuts[i] > fc.cuts[i - 1])) {
                throw ModelError("cut points must be strictly increasing");
            }
        }
    }
}

int Discretizer::bin_of(double value, const std::vector<double>& cuts) {
    // #cuts <= value; clamps below the first cut to bin 0 and above the
    // last cut to the top bin by construction
    auto it = std::upper_bound(cuts.begin(), cuts.end(), value);
    return static_cast<int>(it - cuts.begin());
}

namespace {

double entropy_of_counts(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

struct ValueLabel {
    double value;
    int label;
};

/// Fayyad-Irani recursive MDL partitioning over sorted (value, label) pairs.
/// Candidate thresholds are midpoints between adjacent distinct values; a
/// split is kept when gain > (log2(N-1) + delta) / N.
class MdlSplitter {
public:
    MdlSplitter(std::vector<ValueLabel> data, std::size_t class_count)
        : data_(std::move(data)), class_count_(class_count) {
        std::sort(data_.begin(), data_.end(),
                  [](const ValueLabel& a, const ValueLabel& b) { return a.value < b.value; });
    }

    std::vector<double> run() {
        std::vector<double> cuts;
        recurse(0, data_.size(), cuts);
        std::sort(cuts.begin(), cuts.end());
        return cuts;
    }

private:
    void recurse(std::size_t begin, std::size_t end, std::vector<double>& cuts) {
        const std::size_t n = end - begin;
        if (n < 2) return;

        std::vector<std::size_t> total(class_count_, 0);
        for (std::size_t i = begin; i < end; ++i) total[data_[i].label]++;
        const double parent_entropy = entropy_of_counts(total, n);
        if (parent_entropy == 0.0) return;

        std::vector<std::size_t> left(class_count_, 0);
        std::vector<std::size_t> best_left, best_right;
        double best_gain = 0.0;
        double best_cut = 0.0;
        std::size_t best_pos = 0;
        bool found = false;

        for (std::size_t i = begin; i + 1 < end; ++i) {
            left[data_[i].label]++;
            if (data_[i].value == data_[i + 1].value) continue;
            const std::size_t nl = i + 1 - begin;
            const std::size_t nr = n - nl;
            std::vector<std::size_t> right(class_count_);
            for (std::size_t c = 0; c < class_count_; ++c) right[c] = total[c] - left[c];
            const double gain =
                parent_entropy -
                (static_cast<double>(nl) * entropy_of_counts(left, nl) +
                 static_cast<double>(nr) * entropy_of_counts(right, nr)) /
                    static_cast<double>(n);
            if (gain > best_gain) {
                best_gain = gain;
                best_cut = (data_[i].value + data_[i + 1].value) / 2.0;
                best_pos = i + 1;
                best_left = left;
                best_right = std::move(right);
                found = true;
            }
        }
        if (!found) return;

        // MDL acceptance (Fayyad & Irani): classes present in parent/children
        const auto classes_in = [](const std::vector<std::size_t>& counts) {
            std::size_t k = 0;
            for (std::size_t c : counts) k += c > 0;
            return k;
        };
        const double k = static_cast<double>(classes_in(total));
        const double k1 = static_cast<double>(classes_in(best_left));
        const double k2 = static_cast<double>(classes_in(best_right));
        const std::size_t nl = best_pos - begin;
        const std::size_t nr = n - nl;
        const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                             (k * parent_entropy - k1 * entropy_of_counts(best_left, nl) -
                              k2 * entropy_of_counts(best_right, nr));
        const double threshold =
            (std::log2(static_cast<double>(n) - 1.0) + delta) / static_cast<double>(n);
        if (best_gain <= threshold) return;

        cuts.push_back(best_cut);
        recurse(begin, best_pos, cuts);
        recurse(best_pos, end, cuts);
    }

    std::vector<ValueLabel> data_;
    std::size_t class_count_;
};

std::vector<double> equal_width_cuts(const std::vector<double>& values, int bins) {
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi) return {};
    std::vector<double> cuts;
    const double width = (hi - lo) / static_cast<double>(bins);
    for (int i = 1; i < bins; ++i) {
        const double cut = lo + width * static_cast<double>(i);
        if (!cuts.empty() && !(cut > cuts.back())) continue;
        cuts.push_back(cut);
    }
    return cuts;
}

std::vector<double> equal_frequency_cuts(std::vector<double> values, int bins) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    std::vector<double> cuts;
    for (int i = 1; i < bins; ++i) {
        const std::size_t pos = n * static_cast<std::size_t>(i) / static_cast<std::size_t>(bins);
        if (pos == 0 || pos >= n) continue;
        const double lo = values[pos - 1], hi = values[pos];
        if (hi > lo) {
            const double cut = (lo + hi) / 2.0;
            if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
        }
    }
    return cuts;
}

}  // namespace

Discretizer fit_discretizer(const Dataset& ds, const std::vector<std::size_t>& features,
                            DiscretizeMethod method, int bin_count) {
    if (ds.records.empty()) throw DataError("cannot fit a discretizer on an empty dataset");
    if (method != DiscretizeMethod::EntropyMdl && bin_count < 2) {
        throw UsageError("bin count must be at least 2");
    }
    std::unordered_set<std::size_t> seen;
    std::vector<Discretizer::FeatureCuts> all_cuts;
    for (std::size_t f : features) {
        if (f >= ds.schema.feature_count()) {
            throw DataError("feature index " + std::to_string(f) + " out of range");
        }
        if (ds.schema.feature(f).kind != FeatureKind::Numeric) {
            throw DataError("feature '" + ds.schema.feature(f).name +
                            "' is nominal and cannot be discretized");
        }
        if (!seen.insert(f).second) continue;

        Discretizer::FeatureCuts fc;
        fc.feature = f;
        switch (method) {
            case DiscretizeMethod::EqualWidth: {
                std::vector<double> values;
                values.reserve(ds.size());
                for (const auto& r : ds.records) values.push_back(r.values[f]);
                fc.cuts = equal_width_cuts(values, bin_count);
                break;
            }
            case DiscretizeMethod::EqualFrequency: {
                std::vector<double> values;
                values.reserve(ds.size());
                for (const auto& r : ds.records) values.push_back(r.values[f]);
                fc.cuts = equal_frequency_cuts(std::move(values), bin_count);
                break;
            }
            case DiscretizeMethod::EntropyMdl: {
                std::vector<ValueLabel> data;
                data.reserve(ds.size());
                for (const auto& r : ds.records) data.push_back({r.values[f], r.label});
                fc.cuts = MdlSplitter(std::move(data), ds.schema.class_count()).run();
                break;
            }
        }
        all_cuts.push_back(std::move(fc));
    }
    std::sort(all_cuts.begin(), all_cuts.end(),
              [](const auto& a, const auto& b) { return a.feature < b.feature; });
    return Discretizer(std::move(all_cuts), method, bin_count, ds.schema.fingerprint());
}

namespace {

FeatureSchema discretized_schema(const Discretizer& disc, const FeatureSchema& schema) {
    std::vector<FeatureInfo> features = schema.features();
    for (const auto& fc : disc.feature_cuts()) {
        FeatureInfo& info = features[fc.feature];
        info.kind = FeatureKind::Nominal;
        info.values.clear();
        for (std::size_t b = 0; b <= fc.cuts.size(); ++b) {
            info.values.push_back("bin_" + std::to_string(b));
        }
    }
    return FeatureSchema(std::move(features), schema.class_values(),
                         schema.has_difficulty_column());
}

}  // namespace

Dataset apply_discretizer(const Discretizer& disc, const Dataset& ds) {
    if (ds.schema.fingerprint() != disc.source_fingerprint()) {
        throw DataError("dataset schema does not match the discretizer's training schema");
    }
    Dataset out;
    out.schema = discretized_schema(disc, ds.schema);
    out.records.reserve(ds.size());
    for (const auto& rec : ds.records) out.records.push_back(discretize_record(disc, rec));
    return out;
}

Record discretize_record(const Discretizer& disc, const Record& rec) {
    Record out = rec;
    for (const auto& fc : disc.feature_cuts()) {
        out.values[fc.feature] =
            static_cast<double>(Discretizer::bin_of(rec.values[fc.feature], fc.cuts));
    }
    return out;
}

std::vector<std::size_t> numeric_feature_indices(const FeatureSchema& schema) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < schema.feature_count(); ++i) {
        if (schema.feature(i).kind == FeatureKind::Numeric) out.push_back(i);
    }
    return out;
}

}  // namespace nids
