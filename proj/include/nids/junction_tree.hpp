#pragma once

#include <cstddef>
#include <vector>

#include "nids/bayes_net.hpp"
#include "nids/class_distribution.hpp"

namespace nids {

/// Clique tree over the moralized, triangulated network. Built as a
/// maximum-weight spanning forest on separator sizes, which gives the
/// running intersection property on each connected component.
struct JunctionTree {
    struct Edge {
        std::size_t a = 0, b = 0;              // clique indices
        std::vector<std::size_t> separator;    // intersection, sorted
    };

    std::vector<std::vector<std::size_t>> cliques;  // sorted node sets, maximal
    std::vector<Edge> edges;
    std::vector<std::vector<std::size_t>> adjacency;  // clique -> edge indices
    std::vector<std::size_t> family_clique;  // per node: clique covering {node} u parents
};

/// Moralize, triangulate by minimum-fill elimination (ties to the lowest
/// node id), extract maximal cliques and connect them by a maximum-weight
/// spanning forest over separator sizes. Potentials are assigned at query
/// time from a model's CPTs.
JunctionTree build_junction_tree(const NetworkStructure& structure);

/// Structural check: for every node, the cliques containing it form a
/// connected subtree, every family is covered, and separators equal the
/// intersections of their endpoints.
bool verify_running_intersection(const JunctionTree& jtree, std::size_t node_count);

/// Exact class marginal given evidence (-1 = unobserved, otherwise the
/// observed value). Potentials are initialized from the CPTs with observed
/// variables sliced out, then calibrated by a two-pass message schedule;
/// the marginal is read from a clique containing class_node and
/// normalized. Throws InconsistentEvidenceError when the evidence has zero
/// probability under the model.
ClassDistribution query_class_marginal(const BayesNetModel& model, const JunctionTree& jtree,
                                       const std::vector<int>& evidence,
                                       std::size_t class_node);

/// query_class_marginal with every feature of the record as evidence.
ClassDistribution predict_bn(const BayesNetModel& model, const JunctionTree& jtree,
                             const Record& record);

}  // namespace nids
