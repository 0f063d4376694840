#pragma once

#include <cstdint>
#include <vector>

#include "nids/class_distribution.hpp"
#include "nids/dataset.hpp"

namespace nids {

/// Directed acyclic structure over the nodes of a discrete dataset.
/// Node i < feature_count is feature i; node feature_count is the class.
/// Acyclicity holds by construction: every parent precedes its child in
/// the ordering.
struct NetworkStructure {
    std::size_t node_count = 0;
    std::vector<std::size_t> ordering;              // permutation of node ids
    std::vector<std::vector<std::size_t>> parents;  // sorted, per node
};

/// Structure plus conditional probability tables. CPT layout per node:
/// cpts[node][config * card + value], where config is the mixed-radix
/// index over the sorted parent list with the first parent varying
/// fastest.
struct BayesNetModel {
    NetworkStructure structure;
    std::vector<std::size_t> cardinalities;  // per node
    std::vector<std::vector<double>> cpts;
    double smoothing = 1.0;

    std::size_t class_node() const { return structure.node_count - 1; }

    /// config index of a full assignment for the given node's parents.
    std::size_t parent_config(std::size_t node, const std::vector<int>& assignment) const;
};

/// Node id of the class column for a dataset with d features.
inline std::size_t class_node_of(std::size_t feature_count) { return feature_count; }

/// K2 node ordering: class node first, then features in schema order.
std::vector<std::size_t> class_first_ordering(std::size_t feature_count);

/// Log Cooper-Herskovits marginal likelihood of `node` having `parents`,
/// with a uniform Dirichlet prior alpha > 0:
///   sum_j [ lgamma(r*a) - lgamma(N_j + r*a)
///           + sum_k (lgamma(N_jk + a) - lgamma(a)) ].
/// Requires an all-nominal dataset.
double k2_score(const Dataset& ds, std::size_t node, const std::vector<std::size_t>& parents,
                double alpha);

/// Greedy K2: for each node in the ordering, repeatedly adds the single
/// predecessor that most increases the score, stopping when no addition
/// improves it or max_parents is reached. Ties go to the lowest node id.
NetworkStructure k2_search(const Dataset& ds, const std::vector<std::size_t>& ordering,
                           std::size_t max_parents, double alpha);

/// CPT estimation: (N_jk + a) / (N_j + r*a); unobserved parent
/// configurations get the uniform distribution.
BayesNetModel fit_cpts(const Dataset& ds, const NetworkStructure& structure, double alpha);

}  // namespace nids
