#include "nids/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "nids/errors.hpp"
#include "nids/parallel.hpp"

namespace nids {

namespace {

/// Column-major integer view of an all-nominal dataset, class appended as
/// the last node.
struct DiscreteView {
    std::vector<std::vector<std::uint32_t>> columns;  // [node][record]
    std::vector<std::size_t> cards;
    std::size_t records = 0;
};

DiscreteView make_view(const Dataset& ds) {
    const std::size_t features = ds.schema.feature_count();
    for (std::size_t f = 0; f < features; ++f) {
        if (ds.schema.feature(f).kind != FeatureKind::Numeric) continue;
        throw DataError("feature '" + ds.schema.feature(f).name +
                        "' is numeric; discretize before structure learning");
    }
    DiscreteView view;
    view.records = ds.size();
    view.columns.resize(features + 1);
    view.cards.resize(features + 1);
    for (std::size_t f = 0; f < features; ++f) {
        view.cards[f] = ds.schema.feature(f).values.size();
        auto& col = view.columns[f];
        col.resize(ds.size());
        for (std::size_t r = 0; r < ds.size(); ++r) {
            col[r] = static_cast<std::uint32_t>(ds.records[r].values[f]);
        }
    }
    view.cards[features] = ds.schema.class_count();
    auto& cls = view.columns[features];
    cls.resize(ds.size());
    for (std::size_t r = 0; r < ds.size(); ++r) {
        cls[r] = static_cast<std::uint32_t>(ds.records[r].label);
    }
    return view;
}

/// Counts N_jk for (node, parents); dense when the table is small enough,
/// hashed otherwise. Returns pairs (N_j_counts per value) via callback.
template <typename Fn>
void for_each_config(const DiscreteView& view, std::size_t node,
                     const std::vector<std::size_t>& parents, Fn&& fn) {
    const std::size_t card = view.cards[node];
    const std::size_t dense_cap = (std::size_t(1) << 22) / card;
    std::size_t configs = 1;
    bool overflow = false;
    for (std::size_t p : parents) {
        if (configs > dense_cap / std::max<std::size_t>(1, view.cards[p])) {
            overflow = true;
            break;
        }
        configs *= view.cards[p];
    }

    const auto& node_col = view.columns[node];
    if (!overflow) {
        std::vector<double> counts(configs * card, 0.0);
        for (std::size_t r = 0; r < view.records; ++r) {
            std::size_t config = 0, stride = 1;
            for (std::size_t p : parents) {
                config += view.columns[p][r] * stride;
                stride *= view.cards[p];
            }
            counts[config * card + node_col[r]] += 1.0;
        }
        for (std::size_t j = 0; j < configs; ++j) {
            fn(j, &counts[j * card]);
        }
    } else {
        std::unordered_map<std::uint64_t, std::vector<double>> counts;
        for (std::size_t r = 0; r < view.records; ++r) {
            std::uint64_t config = 0, stride = 1;
            for (std::size_t p : parents) {
                config += std::uint64_t(view.columns[p][r]) * stride;
                stride *= view.cards[p];
            }
            auto& slot = counts[config];
            if (slot.empty()) slot.assign(card, 0.0);
            slot[node_col[r]] += 1.0;
        }
        for (auto& [config, slot] : counts) {
            fn(static_cast<std::size_t>(config), slot.data());
        }
        // untouched configurations contribute exactly 0 to the score and
        // the uniform distribution to CPTs; callers handle both.
    }
}

double score_with_view(const DiscreteView& view, std::size_t node,
                       const std::vector<std::size_t>& parents, double alpha) {
    const double r = static_cast<double>(view.cards[node]);
    const double lg_ra = std::lgamma(r * alpha);
    const double lg_a = std::lgamma(alpha);
    double score = 0.0;
    for_each_config(view, node, parents, [&](std::size_t, const double* counts) {
        double nj = 0.0;
        double inner = 0.0;
        for (std::size_t k = 0; k < view.cards[node]; ++k) {
            nj += counts[k];
            inner += std::lgamma(counts[k] + alpha) - lg_a;
        }
        if (nj == 0.0) return;  // empty configuration, identically zero
        score += lg_ra - std::lgamma(nj + r * alpha) + inner;
    });
    return score;
}

void check_node_args(const DiscreteView& view, std::size_t node,
                     const std::vector<std::size_t>& parents, double alpha) {
    if (node >= view.cards.size()) throw DataError("node index out of range");
    if (!(alpha > 0)) throw UsageError("K2 prior alpha must be positive");
    for (std::size_t p : parents) {
        if (p >= view.cards.size()) throw DataError("parent index out of range");
        if (p == node) throw DataError("a node cannot be its own parent");
    }
}

}  // namespace

std::size_t BayesNetModel::parent_config(std::size_t node,
                                         const std::vector<int>& assignment) const {
    std::size_t config = 0, stride = 1;
    for (std::size_t p : structure.parents[node]) {
        config += static_cast<std::size_t>(assignment[p]) * stride;
        stride *= cardinalities[p];
    }
    return config;
}

std::vector<std::size_t> class_first_ordering(std::size_t feature_count) {
    std::vector<std::size_t> ordering;
    ordering.reserve(feature_count + 1);
    ordering.push_back(feature_count);
    for (std::size_t f = 0; f < feature_count; ++f) ordering.push_back(f);
    return ordering;
}

double k2_score(const Dataset& ds, std::size_t node, const std::vector<std::size_t>& parents,
                double alpha) {
    const DiscreteView view = make_view(ds);
    check_node_args(view, node, parents, alpha);
    return score_with_view(view, node, parents, alpha);
}

NetworkStructure k2_search(const Dataset& ds, const std::vector<std::size_t>& ordering,
                           std::size_t max_parents, double alpha) {
    const DiscreteView view = make_view(ds);
    const std::size_t nodes = view.cards.size();
    {
        std::vector<std::size_t> sorted = ordering;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> expect(nodes);
        std::iota(expect.begin(), expect.end(), 0u);
        if (sorted != expect) throw DataError("ordering must be a permutation of the nodes");
    }
    if (!(alpha > 0)) throw UsageError("K2 prior alpha must be positive");

    NetworkStructure structure;
    structure.node_count = nodes;
    structure.ordering = ordering;
    structure.parents.resize(nodes);

    for (std::size_t pos = 0; pos < nodes; ++pos) {
        const std::size_t node = ordering[pos];
        // candidate parents: predecessors in the ordering, by ascending id
        std::vector<std::size_t> predecessors(ordering.begin(), ordering.begin() + pos);
        std::sort(predecessors.begin(), predecessors.end());

        auto& parents = structure.parents[node];
        double current = score_with_view(view, node, parents, alpha);

        while (parents.size() < max_parents && !predecessors.empty()) {
            std::vector<double> scores(predecessors.size());
            parallel_for(predecessors.size(), [&](std::size_t c) {
                std::vector<std::size_t> trial = parents;
                trial.insert(std::lower_bound(trial.begin(), trial.end(), predecessors[c]),
                             predecessors[c]);
                scores[c] = score_with_view(view, node, trial, alpha);
            });
            std::size_t best = 0;
            for (std::size_t c = 1; c < predecessors.size(); ++c) {
                if (scores[c] > scores[best]) best = c;  // ties keep the lower id
            }
            if (!(scores[best] > current)) break;  // no single parent improves
            if (scores[best] < current) {
                throw std::logic_error("K2 score decreased after an accepted parent");
            }
            parents.insert(std::lower_bound(parents.begin(), parents.end(), predecessors[best]),
                           predecessors[best]);
            current = scores[best];
            predecessors.erase(predecessors.begin() + best);
        }
    }
    return structure;
}

BayesNetModel fit_cpts(const Dataset& ds, const NetworkStructure& structure, double alpha) {
    const DiscreteView view = make_view(ds);
    if (structure.node_count != view.cards.size()) {
        throw DataError("structure node count does not match the dataset");
    }
    if (alpha < 0) throw UsageError("smoothing must be non-negative");

    BayesNetModel model;
    model.structure = structure;
    model.cardinalities = view.cards;
    model.smoothing = alpha;
    model.cpts.resize(structure.node_count);

    for (std::size_t node = 0; node < structure.node_count; ++node) {
        check_node_args(view, node, structure.parents[node], 1.0);
        const std::size_t card = view.cards[node];
        std::size_t configs = 1;
        for (std::size_t p : structure.parents[node]) {
            if (configs > (std::size_t(1) << 26) / (view.cards[p] * card)) {
                throw ModelError("CPT for node " + std::to_string(node) +
                                 " is too large; reduce max_parents");
            }
            configs *= view.cards[p];
        }

        auto& cpt = model.cpts[node];
        cpt.assign(configs * card, 1.0 / static_cast<double>(card));  // uniform fallback
        for_each_config(view, node, structure.parents[node],
                        [&](std::size_t j, const double* counts) {
                            double nj = 0.0;
                            for (std::size_t k = 0; k < card; ++k) nj += counts[k];
                            if (nj == 0.0) return;
                            const double denom = nj + alpha * static_cast<double>(card);
                            for (std::size_t k = 0; k < card; ++k) {
                                cpt[j * card + k] = (counts[k] + alpha) / denom;
                            }
                        });
    }
    return model;
}

}  // namespace nids
