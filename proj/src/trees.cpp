#include "nids/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nids/errors.hpp"
#include "nids/parallel.hpp"
#include "nids/rng.hpp"

namespace nids {

int auto_k_features(std::size_t feature_count) {
    int k = 1;
    while ((std::size_t(1) << k) <= feature_count) ++k;  // k = floor(log2(d)) + 1
    return k;
}

namespace {

double entropy_bits(const std::vector<double>& counts, double n) {
    if (n <= 0) return 0.0;
    double h = 0.0;
    for (double c : counts) {
        if (c > 0) h -= c * std::log2(c);
    }
    return h / n + std::log2(n);
}

struct SplitScratch {
    std::vector<std::pair<double, int>> values;  // (feature value, label)
    std::vector<double> total;
    std::vector<double> left;
    std::vector<double> nominal_counts;  // value-major [value * classes + class]
};

std::optional<Split> best_split_impl(const Dataset& ds,
                                     const std::uint32_t* subset, std::size_t n,
                                     const std::vector<int>& candidates,
                                     SplitScratch& scratch) {
    const std::size_t classes = ds.schema.class_count();
    scratch.total.assign(classes, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        scratch.total[ds.records[subset[i]].label] += 1.0;
    }
    const double dn = static_cast<double>(n);
    const double parent_entropy = entropy_bits(scratch.total, dn);
    if (parent_entropy == 0.0) return std::nullopt;  // pure node

    std::optional<Split> best;
    for (int f : candidates) {
        const FeatureInfo& info = ds.schema.feature(f);
        if (info.kind == FeatureKind::Numeric) {
            auto& vals = scratch.values;
            vals.clear();
            for (std::size_t i = 0; i < n; ++i) {
                const Record& r = ds.records[subset[i]];
                vals.push_back({r.values[f], r.label});
            }
            std::sort(vals.begin(), vals.end());
            scratch.left.assign(classes, 0.0);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                scratch.left[vals[i].second] += 1.0;
                if (vals[i].first == vals[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = dn - nl;
                double hl = 0.0, hr = 0.0;
                for (std::size_t c = 0; c < classes; ++c) {
                    const double l = scratch.left[c];
                    const double r = scratch.total[c] - l;
                    if (l > 0) hl -= l * std::log2(l);
                    if (r > 0) hr -= r * std::log2(r);
                }
                hl = hl / nl + std::log2(nl);
                hr = nr > 0 ? hr / nr + std::log2(nr) : 0.0;
                const double gain = parent_entropy - (nl * hl + nr * hr) / dn;
                if (gain > 0 && (!best || gain > best->gain)) {
                    double threshold = (vals[i].first + vals[i + 1].first) / 2.0;
                    if (threshold >= vals[i + 1].first) threshold = vals[i].first;
                    best = Split{f, false, threshold, gain};
                }
            }
        } else {
            const std::size_t card = info.values.size();
            scratch.nominal_counts.assign(card * classes, 0.0);
            std::vector<double> value_n(card, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const Record& r = ds.records[subset[i]];
                const auto v = static_cast<std::size_t>(r.values[f]);
                scratch.nominal_counts[v * classes + r.label] += 1.0;
                value_n[v] += 1.0;
            }
            double weighted = 0.0;
            std::size_t non_empty = 0;
            for (std::size_t v = 0; v < card; ++v) {
                if (value_n[v] == 0) continue;
                ++non_empty;
                double h = 0.0;
                for (std::size_t c = 0; c < classes; ++c) {
                    const double cv = scratch.nominal_counts[v * classes + c];
                    if (cv > 0) h -= cv * std::log2(cv);
                }
                weighted += h + value_n[v] * std::log2(value_n[v]);
            }
            if (non_empty < 2) continue;  // single observed value, no split
            const double gain = parent_entropy - weighted / dn;
            if (gain > 0 && (!best || gain > best->gain)) {
                best = Split{f, true, 0.0, gain};
            }
        }
    }
    return best;
}

class TreeBuilder {
public:
    TreeBuilder(const Dataset& ds, int k_features, int min_leaf, int max_depth,
                std::uint64_t seed)
        : ds_(ds),
          k_(k_features),
          min_leaf_(min_leaf),
          max_depth_(max_depth),
          rng_(seed),
          feature_pool_(ds.schema.feature_count()) {
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
        buffer_.resize(0);
    }

    std::unique_ptr<TreeNode> build(std::vector<std::uint32_t>& indices) {
        buffer_.resize(indices.size());
        return grow(indices.data(), indices.size(), 0);
    }

private:
    std::unique_ptr<TreeNode> make_leaf(const std::uint32_t* subset, std::size_t n) {
        auto leaf = std::make_unique<TreeNode>();
        leaf->class_counts.assign(ds_.schema.class_count(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            leaf->class_counts[ds_.records[subset[i]].label]++;
        }
        return leaf;
    }

    std::unique_ptr<TreeNode> grow(std::uint32_t* subset, std::size_t n, int depth) {
        if (n < 2 || n < static_cast<std::size_t>(min_leaf_) ||
            (max_depth_ > 0 && depth >= max_depth_)) {
            return make_leaf(subset, n);
        }

        // draw k distinct candidate features, evaluated in index order
        std::vector<int> pool = feature_pool_;
        const std::size_t k = std::min<std::size_t>(k_, pool.size());
        rng_.partial_shuffle(pool, k);
        std::vector<int> candidates(pool.begin(), pool.begin() + k);
        std::sort(candidates.begin(), candidates.end());

        const auto split = best_split_impl(ds_, subset, n, candidates, scratch_);
        if (!split) return make_leaf(subset, n);

        auto node = std::make_unique<TreeNode>();
        node->feature = split->feature;
        node->is_nominal = split->is_nominal;
        node->threshold = split->threshold;

        if (!split->is_nominal) {
            // stable partition through the side buffer keeps the recursion
            // order platform-independent
            std::size_t nl = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (ds_.records[subset[i]].values[split->feature] <= split->threshold) {
                    subset[nl++] = subset[i];
                } else {
                    buffer_[i - nl] = subset[i];
                }
            }
            std::copy(buffer_.begin(), buffer_.begin() + (n - nl), subset + nl);
            node->children.resize(2);
            node->majority_child = nl >= n - nl ? 0 : 1;
            node->children[0] = grow(subset, nl, depth + 1);
            node->children[1] = grow(subset + nl, n - nl, depth + 1);
        } else {
            const std::size_t card = ds_.schema.feature(split->feature).values.size();
            std::vector<std::size_t> bucket_n(card, 0);
            for (std::size_t i = 0; i < n; ++i) {
                bucket_n[static_cast<std::size_t>(
                    ds_.records[subset[i]].values[split->feature])]++;
            }
            std::vector<std::size_t> offset(card, 0);
            for (std::size_t v = 1; v < card; ++v) offset[v] = offset[v - 1] + bucket_n[v - 1];
            auto cursor = offset;
            for (std::size_t i = 0; i < n; ++i) {
                const auto v = static_cast<std::size_t>(
                    ds_.records[subset[i]].values[split->feature]);
                buffer_[cursor[v]++] = subset[i];
            }
            std::copy(buffer_.begin(), buffer_.begin() + n, subset);
            node->children.resize(card);
            std::size_t heaviest = 0;
            for (std::size_t v = 0; v < card; ++v) {
                if (bucket_n[v] > bucket_n[heaviest]) heaviest = v;
                if (bucket_n[v] > 0) {
                    node->children[v] = grow(subset + offset[v], bucket_n[v], depth + 1);
                }
            }
            node->majority_child = static_cast<int>(heaviest);
        }
        return node;
    }

    const Dataset& ds_;
    int k_;
    int min_leaf_;
    int max_depth_;
    Rng rng_;
    std::vector<int> feature_pool_;
    std::vector<std::uint32_t> buffer_;
    SplitScratch scratch_;
};

std::vector<std::uint32_t> all_indices(std::size_t n) {
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    return idx;
}

}  // namespace

std::optional<Split> best_split(const Dataset& ds, const std::vector<std::uint32_t>& subset,
                                const std::vector<int>& candidate_features) {
    if (subset.size() < 2 || candidate_features.empty()) return std::nullopt;
    std::vector<int> candidates = candidate_features;
    std::sort(candidates.begin(), candidates.end());
    SplitScratch scratch;
    return best_split_impl(ds, subset.data(), subset.size(), candidates, scratch);
}

std::unique_ptr<TreeNode> train_random_tree(const Dataset& ds, const TreeConfig& cfg) {
    if (ds.records.empty()) throw DataError("cannot train a tree on an empty dataset");
    const int k = cfg.k_features > 0 ? cfg.k_features : auto_k_features(ds.schema.feature_count());
    if (static_cast<std::size_t>(k) > ds.schema.feature_count()) {
        throw UsageError("k_features exceeds the feature count");
    }
    if (cfg.min_leaf < 1) throw UsageError("min_leaf must be positive");
    TreeBuilder builder(ds, k, cfg.min_leaf, cfg.max_depth, cfg.seed);
    auto indices = all_indices(ds.size());
    return builder.build(indices);
}

ClassDistribution predict_tree(const TreeNode& root, const Record& record) {
    const TreeNode* node = &root;
    while (!node->is_leaf()) {
        if (static_cast<std::size_t>(node->feature) >= record.values.size()) {
            throw DataError("record is too short for this tree");
        }
        const double v = record.values[node->feature];
        const TreeNode* next = nullptr;
        if (!node->is_nominal) {
            next = (v <= node->threshold ? node->children[0] : node->children[1]).get();
        } else {
            const auto idx = static_cast<std::size_t>(v);
            if (v < 0 || idx >= node->children.size() || v != std::floor(v)) {
                throw DataError("nominal value out of range for this tree");
            }
            next = node->children[idx].get();
            if (!next) next = node->children[node->majority_child].get();
        }
        node = next;
    }
    ClassDistribution dist(node->class_counts.size());
    for (std::size_t c = 0; c < node->class_counts.size(); ++c) {
        dist[c] = static_cast<double>(node->class_counts[c]);
    }
    dist.normalize();
    return dist;
}

ForestModel train_random_forest(const Dataset& ds, const ForestConfig& cfg) {
    if (ds.records.empty()) throw DataError("cannot train a forest on an empty dataset");
    if (cfg.tree_count < 1) throw UsageError("tree_count must be at least 1");
    if (!(cfg.bag_fraction > 0.0) || cfg.bag_fraction > 1.0) {
        throw UsageError("bag_fraction must be in (0, 1]");
    }
    const std::size_t total = ds.size();
    const auto bag_size = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.bag_fraction * static_cast<double>(total))));
    const int k =
        cfg.r_features > 0 ? cfg.r_features : auto_k_features(ds.schema.feature_count());
    if (static_cast<std::size_t>(k) > ds.schema.feature_count()) {
        throw UsageError("r_features exceeds the feature count");
    }

    ForestModel model;
    model.config = cfg;
    model.class_labels = ds.schema.class_values();
    model.trees.resize(cfg.tree_count);

    parallel_for(static_cast<std::size_t>(cfg.tree_count), [&](std::size_t i) {
        // independent seed streams per tree: one for the bag, one for the
        // node-level feature draws
        Rng bag_rng(mix_seed(cfg.seed, 2 * i + 1));
        std::vector<std::uint32_t> bag;
        if (cfg.with_replacement) {
            bag.reserve(bag_size);
            for (std::size_t j = 0; j < bag_size; ++j) {
                bag.push_back(static_cast<std::uint32_t>(bag_rng.next_below(total)));
            }
        } else {
            bag = all_indices(total);
            bag_rng.partial_shuffle(bag, bag_size);
            bag.resize(bag_size);
        }
        std::sort(bag.begin(), bag.end());

        TreeBuilder builder(ds, k, cfg.min_leaf, 0, mix_seed(cfg.seed, 2 * i));
        model.trees[i] = builder.build(bag);
    });
    return model;
}

ClassDistribution predict_forest(const ForestModel& model, const Record& record) {
    ClassDistribution votes(model.class_labels.size());
    for (const auto& tree : model.trees) {
        votes[predict_tree(*tree, record).argmax()] += 1.0;
    }
    for (double& v : votes.probabilities) v /= static_cast<double>(model.trees.size());
    return votes;
}

}  // namespace nids
