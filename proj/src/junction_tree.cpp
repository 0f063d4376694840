#include "nids/junction_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nids/errors.hpp"

namespace nids {

namespace {

std::vector<std::size_t> sorted_intersection(const std::vector<std::size_t>& a,
                                             const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool contains_all(const std::vector<std::size_t>& superset,
                  const std::vector<std::size_t>& subset) {
    return std::includes(superset.begin(), superset.end(), subset.begin(), subset.end());
}

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

}  // namespace

JunctionTree build_junction_tree(const NetworkStructure& structure) {
    const std::size_t n = structure.node_count;

    // moral graph: node-parent edges plus married co-parents
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    auto connect = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        adj[a][b] = adj[b][a] = true;
    };
    for (std::size_t v = 0; v < n; ++v) {
        const auto& parents = structure.parents[v];
        for (std::size_t p : parents) connect(v, p);
        for (std::size_t i = 0; i < parents.size(); ++i) {
            for (std::size_t j = i + 1; j < parents.size(); ++j) {
                connect(parents[i], parents[j]);
            }
        }
    }

    // minimum-fill elimination; records one clique per eliminated node
    std::vector<bool> eliminated(n, false);
    std::vector<std::vector<std::size_t>> elimination_cliques;
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t best = n;
        std::size_t best_fill = ~std::size_t(0);
        for (std::size_t v = 0; v < n; ++v) {
            if (eliminated[v]) continue;
            std::vector<std::size_t> nbrs;
            for (std::size_t u = 0; u < n; ++u) {
                if (!eliminated[u] && adj[v][u]) nbrs.push_back(u);
            }
            std::size_t fill = 0;
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                    fill += !adj[nbrs[i]][nbrs[j]];
                }
            }
            if (fill < best_fill) {  // ties keep the lowest node id
                best_fill = fill;
                best = v;
            }
        }
        std::vector<std::size_t> clique{best};
        for (std::size_t u = 0; u < n; ++u) {
            if (!eliminated[u] && u != best && adj[best][u]) clique.push_back(u);
        }
        std::sort(clique.begin(), clique.end());
        for (std::size_t i = 1; i < clique.size(); ++i) {
            for (std::size_t j = i + 1; j < clique.size(); ++j) {
                // clique[0..] includes best; fill edges among its neighbours
                connect(clique[i], clique[j]);
            }
        }
        elimination_cliques.push_back(std::move(clique));
        eliminated[best] = true;
    }

    JunctionTree jtree;
    // keep maximal cliques only (earlier elimination cliques are the larger
    // ones; a clique is dropped when contained in an already-kept one)
    for (const auto& c : elimination_cliques) {
        bool maximal = true;
        for (const auto& kept : jtree.cliques) {
            if (contains_all(kept, c)) {
                maximal = false;
                break;
            }
        }
        if (maximal) jtree.cliques.push_back(c);
    }

    // maximum-weight spanning forest over separator sizes (Kruskal,
    // deterministic ordering)
    struct Candidate {
        std::size_t weight, a, b;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < jtree.cliques.size(); ++i) {
        for (std::size_t j = i + 1; j < jtree.cliques.size(); ++j) {
            const auto sep = sorted_intersection(jtree.cliques[i], jtree.cliques[j]);
            if (!sep.empty()) candidates.push_back({sep.size(), i, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.weight != y.weight) return x.weight > y.weight;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    DisjointSet components(jtree.cliques.size());
    jtree.adjacency.resize(jtree.cliques.size());
    for (const auto& cand : candidates) {
        if (!components.unite(cand.a, cand.b)) continue;
        JunctionTree::Edge edge;
        edge.a = cand.a;
        edge.b = cand.b;
        edge.separator = sorted_intersection(jtree.cliques[cand.a], jtree.cliques[cand.b]);
        jtree.adjacency[cand.a].push_back(jtree.edges.size());
        jtree.adjacency[cand.b].push_back(jtree.edges.size());
        jtree.edges.push_back(std::move(edge));
    }

    // every family {node} u parents sits inside some clique by construction
    jtree.family_clique.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::size_t> family = structure.parents[v];
        family.insert(std::lower_bound(family.begin(), family.end(), v), v);
        bool found = false;
        for (std::size_t c = 0; c < jtree.cliques.size(); ++c) {
            if (contains_all(jtree.cliques[c], family)) {
                jtree.family_clique[v] = c;
                found = true;
                break;
            }
        }
        if (!found) throw ModelError("family not covered by any clique");
    }
    return jtree;
}

bool verify_running_intersection(const JunctionTree& jtree, std::size_t node_count) {
    // separators equal endpoint intersections
    for (const auto& e : jtree.edges) {
        if (e.separator != sorted_intersection(jtree.cliques[e.a], jtree.cliques[e.b])) {
            return false;
        }
    }
    // cliques containing each node form a connected subtree
    for (std::size_t v = 0; v < node_count; ++v) {
        std::vector<std::size_t> holding;
        for (std::size_t c = 0; c < jtree.cliques.size(); ++c) {
            if (std::binary_search(jtree.cliques[c].begin(), jtree.cliques[c].end(), v)) {
                holding.push_back(c);
            }
        }
        if (holding.empty()) return false;
        DisjointSet components(jtree.cliques.size());
        for (const auto& e : jtree.edges) {
            if (std::binary_search(e.separator.begin(), e.separator.end(), v)) {
                components.unite(e.a, e.b);
            }
        }
        for (std::size_t c : holding) {
            if (components.find(c) != components.find(holding[0])) return false;
        }
    }
    return true;
}

namespace {

/// Dense factor over the *unobserved* variables of one clique; observed
/// variables are sliced out when potentials are initialized. vars sorted,
/// first var varies fastest.
struct Factor {
    std::vector<std::size_t> vars;
    std::vector<std::size_t> cards;
    std::vector<double> data;

    static Factor over(const std::vector<std::size_t>& vars,
                       const std::vector<std::size_t>& all_cards, double init) {
        Factor f;
        f.vars = vars;
        std::size_t size = 1;
        for (std::size_t v : vars) {
            f.cards.push_back(all_cards[v]);
            size *= all_cards[v];
        }
        f.data.assign(size, init);
        return f;
    }
};

/// Walks every entry of `factor`, exposing the joint assignment through a
/// scratch vector indexed by node id.
template <typename Fn>
void for_each_entry(const Factor& factor, std::vector<int>& assignment, Fn&& fn) {
    const std::size_t size = factor.data.size();
    for (std::size_t v : factor.vars) assignment[v] = 0;
    for (std::size_t idx = 0; idx < size; ++idx) {
        fn(idx);
        for (std::size_t d = 0; d < factor.vars.size(); ++d) {
            if (++assignment[factor.vars[d]] < static_cast<int>(factor.cards[d])) break;
            assignment[factor.vars[d]] = 0;
        }
    }
}

std::size_t index_in(const Factor& factor, const std::vector<int>& assignment) {
    std::size_t idx = 0, stride = 1;
    for (std::size_t d = 0; d < factor.vars.size(); ++d) {
        idx += static_cast<std::size_t>(assignment[factor.vars[d]]) * stride;
        stride *= factor.cards[d];
    }
    return idx;
}

}  // namespace

ClassDistribution query_class_marginal(const BayesNetModel& model, const JunctionTree& jtree,
                                       const std::vector<int>& evidence,
                                       std::size_t class_node) {
    const std::size_t nodes = model.structure.node_count;
    if (evidence.size() != nodes) throw DataError("evidence vector size mismatch");
    if (class_node >= nodes) throw DataError("class node out of range");
    if (evidence[class_node] >= 0) throw DataError("class node must be unobserved");
    for (std::size_t v = 0; v < nodes; ++v) {
        if (evidence[v] >= static_cast<int>(model.cardinalities[v])) {
            throw DataError("evidence value out of range for node " + std::to_string(v));
        }
    }

    // group families by clique, then build evidence-sliced potentials
    const std::size_t cliques = jtree.cliques.size();
    std::vector<std::vector<std::size_t>> clique_families(cliques);
    for (std::size_t v = 0; v < nodes; ++v) {
        clique_families[jtree.family_clique[v]].push_back(v);
    }

    std::vector<int> assignment(nodes, -1);
    for (std::size_t v = 0; v < nodes; ++v) {
        if (evidence[v] >= 0) assignment[v] = evidence[v];
    }

    std::vector<Factor> potential(cliques);
    for (std::size_t c = 0; c < cliques; ++c) {
        std::vector<std::size_t> hidden;
        for (std::size_t v : jtree.cliques[c]) {
            if (evidence[v] < 0) hidden.push_back(v);
        }
        potential[c] = Factor::over(hidden, model.cardinalities, 1.0);
        for_each_entry(potential[c], assignment, [&](std::size_t idx) {
            double value = potential[c].data[idx];
            for (std::size_t v : clique_families[c]) {
                const std::size_t card = model.cardinalities[v];
                value *= model.cpts[v][model.parent_config(v, assignment) * card +
                                       static_cast<std::size_t>(assignment[v])];
            }
            potential[c].data[idx] = value;
        });
    }

    // message schedule: DFS order per component, collect then distribute
    std::vector<int> parent_edge(cliques, -1);
    std::vector<std::size_t> dfs_order;
    std::vector<char> visited(cliques, 0);
    std::vector<std::size_t> roots;
    const std::size_t class_root = jtree.family_clique[class_node];
    for (std::size_t seed = 0; seed <= cliques; ++seed) {
        // the class clique is explored first so its component is rooted there
        const std::size_t start = seed == 0 ? class_root : seed - 1;
        if (visited[start]) continue;
        roots.push_back(start);
        std::vector<std::size_t> stack{start};
        visited[start] = 1;
        while (!stack.empty()) {
            const std::size_t c = stack.back();
            stack.pop_back();
            dfs_order.push_back(c);
            for (std::size_t e : jtree.adjacency[c]) {
                const auto& edge = jtree.edges[e];
                const std::size_t next = edge.a == c ? edge.b : edge.a;
                if (visited[next]) continue;
                visited[next] = 1;
                parent_edge[next] = static_cast<int>(e);
                stack.push_back(next);
            }
        }
    }

    // two messages per edge; direction keyed by source clique
    std::vector<Factor> message_up(jtree.edges.size());    // child -> parent
    std::vector<Factor> message_down(jtree.edges.size());  // parent -> child

    auto send = [&](std::size_t from, std::size_t via_edge, Factor& out) {
        const auto& edge = jtree.edges[via_edge];
        std::vector<std::size_t> sep_hidden;
        for (std::size_t v : edge.separator) {
            if (evidence[v] < 0) sep_hidden.push_back(v);
        }
        Factor combined = potential[from];
        for (std::size_t e : jtree.adjacency[from]) {
            if (e == via_edge) continue;
            // the edge toward the root carries message_down into this
            // clique; edges toward the leaves carry message_up
            const Factor& incoming =
                parent_edge[from] == static_cast<int>(e) ? message_down[e] : message_up[e];
            for_each_entry(combined, assignment, [&](std::size_t idx) {
                combined.data[idx] *= incoming.data[index_in(incoming, assignment)];
            });
        }
        out = Factor::over(sep_hidden, model.cardinalities, 0.0);
        for_each_entry(combined, assignment, [&](std::size_t idx) {
            out.data[index_in(out, assignment)] += combined.data[idx];
        });
    };

    // collect: leaves toward roots (reverse DFS order)
    for (auto it = dfs_order.rbegin(); it != dfs_order.rend(); ++it) {
        const std::size_t c = *it;
        if (parent_edge[c] < 0) continue;
        send(c, static_cast<std::size_t>(parent_edge[c]),
             message_up[static_cast<std::size_t>(parent_edge[c])]);
    }
    // distribute: roots toward leaves
    for (std::size_t c : dfs_order) {
        for (std::size_t e : jtree.adjacency[c]) {
            const auto& edge = jtree.edges[e];
            const std::size_t child = edge.a == c ? edge.b : edge.a;
            if (parent_edge[child] != static_cast<int>(e)) continue;
            send(c, e, message_down[e]);
        }
    }

    // evidence consistency: every component must have positive mass
    for (std::size_t root : roots) {
        Factor belief = potential[root];
        for (std::size_t e : jtree.adjacency[root]) {
            const Factor& incoming = message_up[e];
            for_each_entry(belief, assignment, [&](std::size_t idx) {
                belief.data[idx] *= incoming.data[index_in(incoming, assignment)];
            });
        }
        double z = 0.0;
        for (double v : belief.data) z += v;
        if (!(z > 0.0)) {
            throw InconsistentEvidenceError("evidence has zero probability under the model");
        }
    }

    // read the class marginal from the calibrated clique holding its family
    Factor belief = potential[class_root];
    for (std::size_t e : jtree.adjacency[class_root]) {
        const Factor& incoming =
            parent_edge[class_root] == static_cast<int>(e) ? message_down[e] : message_up[e];
        for_each_entry(belief, assignment, [&](std::size_t idx) {
            belief.data[idx] *= incoming.data[index_in(incoming, assignment)];
        });
    }
    ClassDistribution marginal(model.cardinalities[class_node]);
    for_each_entry(belief, assignment, [&](std::size_t idx) {
        marginal[static_cast<std::size_t>(assignment[class_node])] += belief.data[idx];
    });
    if (!(marginal.sum() > 0.0)) {
        throw InconsistentEvidenceError("evidence has zero probability under the model");
    }
    marginal.normalize();
    return marginal;
}

ClassDistribution predict_bn(const BayesNetModel& model, const JunctionTree& jtree,
                             const Record& record) {
    const std::size_t features = model.structure.node_count - 1;
    if (record.values.size() != features) {
        throw DataError("record does not match the network's feature count");
    }
    std::vector<int> evidence(features + 1, -1);
    for (std::size_t f = 0; f < features; ++f) {
        const double v = record.values[f];
        if (v < 0 || v != std::floor(v)) {
            throw DataError("record feature " + std::to_string(f) +
                            " is not a discrete value");
        }
        evidence[f] = static_cast<int>(v);
    }
    return query_class_marginal(model, jtree, evidence, features);
}

}  // namespace nids
