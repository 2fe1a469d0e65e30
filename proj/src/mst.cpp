#include "plscan/mst.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "plscan/union_find.hpp"

namespace plscan {

namespace {

constexpr std::int64_t kMixed = -1;

void atomic_min(std::atomic<double>& target, double value) {
    double current = target.load(std::memory_order_relaxed);
    while (value < current && !target.compare_exchange_weak(current, value, std::memory_order_relaxed)) {
    }
}

/// Cheapest edge from one query point into a different component. Candidates
/// sharing the query endpoint rank by (weight, other endpoint), which agrees
/// with edge_less for every edge incident to the query.
struct ForeignSearch {
    const SpatialIndex& index;
    const std::vector<double>& core;
    const std::vector<double>& node_min_core;
    const std::vector<std::int64_t>& node_component;
    const std::vector<index_t>& component;
    std::atomic<double>& component_bound;

    index_t query;
    std::int64_t query_component;
    double best_weight = kInfinity;
    index_t best_other;

    double bound(index_t node) const {
        return std::max({core[query], node_min_core[node], index.lower_bound(query, node)});
    }

    void visit(index_t node, double lb) {
        if (node_component[node] == query_component) return;
        if (lb > component_bound.load(std::memory_order_relaxed)) return;
        if (lb > best_weight || (lb == best_weight && index.nodes()[node].min_index > best_other)) return;

        const auto& n = index.nodes()[node];
        if (n.is_leaf) {
            const auto& order = index.order();
            for (index_t i = n.begin; i < n.end; ++i) {
                const index_t other = order[i];
                if (static_cast<std::int64_t>(component[other]) == query_component) continue;
                const double cores = std::max(core[query], core[other]);
                if (cores > best_weight || (cores == best_weight && other > best_other)) continue;
                const double w = mutual_reachability(index.distance(query, other), core[query], core[other]);
                if (w < best_weight || (w == best_weight && other < best_other)) {
                    best_weight = w;
                    best_other = other;
                    atomic_min(component_bound, w);
                }
            }
            return;
        }
        const double lb_left = bound(n.left);
        const double lb_right = bound(n.right);
        if (lb_right < lb_left) {
            visit(n.right, lb_right);
            visit(n.left, lb_left);
        } else {
            visit(n.left, lb_left);
            visit(n.right, lb_right);
        }
    }
};

}  // namespace

SpanningForest build_mst(const SpatialIndex& index, const CoreDistances& core) {
    const index_t n = index.size();
    if (core.values.size() != n) throw InputError("core distances do not match the indexed point count");

    const auto& nodes = index.nodes();
    const auto& order = index.order();

    // Nodes are stored in pre-order, so a reverse sweep visits children first.
    std::vector<double> node_min_core(nodes.size(), kInfinity);
    for (index_t id = nodes.size(); id-- > 0;) {
        const auto& node = nodes[id];
        if (node.is_leaf) {
            for (index_t i = node.begin; i < node.end; ++i) {
                node_min_core[id] = std::min(node_min_core[id], core.values[order[i]]);
            }
        } else {
            node_min_core[id] = std::min(node_min_core[node.left], node_min_core[node.right]);
        }
    }

    SpanningForest forest{n, {}};
    forest.edges.reserve(n - 1);
    DisjointSet sets(n);
    std::vector<index_t> component(n);
    std::vector<std::int64_t> node_component(nodes.size());
    std::vector<std::atomic<double>> component_bound(n);
    std::vector<Edge> point_best(n);
    std::vector<char> has_best(n);

    while (forest.edges.size() + 1 < n) {
        for (index_t i = 0; i < n; ++i) component[i] = sets.find(i);
        for (index_t id = nodes.size(); id-- > 0;) {
            const auto& node = nodes[id];
            if (node.is_leaf) {
                std::int64_t label = static_cast<std::int64_t>(component[order[node.begin]]);
                for (index_t i = node.begin + 1; i < node.end && label != kMixed; ++i) {
                    if (static_cast<std::int64_t>(component[order[i]]) != label) label = kMixed;
                }
                node_component[id] = label;
            } else {
                const auto l = node_component[node.left];
                node_component[id] = (l == node_component[node.right]) ? l : kMixed;
            }
        }
        for (auto& b : component_bound) b.store(kInfinity, std::memory_order_relaxed);

        const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 128)
        for (std::int64_t qi = 0; qi < count; ++qi) {
            const index_t q = order[static_cast<index_t>(qi)];  // tree order keeps neighbours in cache
            const bool had_best = has_best[q];
            has_best[q] = 0;
            auto& bound = component_bound[component[q]];
            if (core.values[q] > bound.load(std::memory_order_relaxed)) continue;
            ForeignSearch search{index, core.values, node_min_core, node_component, component, bound,
                                 q, static_cast<std::int64_t>(component[q]), kInfinity, n};
            // Last round's partner, if still foreign, is a valid starting candidate.
            if (had_best) {
                const index_t prev = point_best[q].u == q ? point_best[q].v : point_best[q].u;
                if (component[prev] != component[q]) {
                    search.best_weight = point_best[q].weight;
                    search.best_other = prev;
                    atomic_min(bound, search.best_weight);
                }
            }
            search.visit(0, search.bound(0));
            if (search.best_other != n) {
                point_best[q] = Edge{std::min(q, search.best_other), std::max(q, search.best_other), search.best_weight};
                has_best[q] = 1;
            }
        }

        // Deterministic reduction: cheapest edge per component under edge_less.
        std::vector<Edge> component_best(n);
        std::vector<char> found(n, 0);
        for (index_t q = 0; q < n; ++q) {
            if (!has_best[q]) continue;
            const index_t c = component[q];
            if (!found[c] || edge_less(point_best[q], component_best[c])) {
                component_best[c] = point_best[q];
                found[c] = 1;
            }
        }
        std::vector<Edge> chosen;
        for (index_t c = 0; c < n; ++c) {
            if (found[c]) chosen.push_back(component_best[c]);
        }
        std::sort(chosen.begin(), chosen.end(), edge_less);
        const index_t before = forest.edges.size();
        for (const Edge& e : chosen) {
            if (sets.unite(e.u, e.v)) forest.edges.push_back(e);
        }
        if (forest.edges.size() == before) break;  // unreachable for a complete graph
    }

    std::sort(forest.edges.begin(), forest.edges.end(), edge_less);
    return forest;
}

SpanningForest from_precomputed(std::vector<Edge> edges, index_t num_points) {
    if (num_points == 0) throw InputError("a forest needs at least one point");
    std::set<std::pair<index_t, index_t>> seen;
    DisjointSet sets(num_points);
    for (index_t i = 0; i < edges.size(); ++i) {
        Edge& e = edges[i];
        const std::string where = "edge " + std::to_string(i) + " (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")";
        if (e.u >= num_points || e.v >= num_points) throw InputError(where + ": vertex id out of range");
        if (!std::isfinite(e.weight) || e.weight < 0.0) throw InputError(where + ": weight must be finite and >= 0");
        if (e.u == e.v) throw InputError(where + ": self-loop forms a cycle");
        if (e.u > e.v) std::swap(e.u, e.v);
        if (!seen.emplace(e.u, e.v).second) throw InputError(where + ": duplicate edge");
        if (!sets.unite(e.u, e.v)) throw InputError(where + ": closes a cycle; input must be a forest");
    }
    std::sort(edges.begin(), edges.end(), edge_less);
    return SpanningForest{num_points, std::move(edges)};
}

}  // namespace plscan
