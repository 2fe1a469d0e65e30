#include "plscan/linkage.hpp"

#include <algorithm>

#include "plscan/union_find.hpp"

namespace plscan {

LinkageTree single_linkage(const SpanningForest& forest, const std::vector<double>& sample_weights) {
    const index_t n = forest.num_points;
    validate_sample_weights(sample_weights, n);

    std::vector<Edge> edges = forest.edges;
    std::stable_sort(edges.begin(), edges.end(), edge_less);

    LinkageTree tree{n, {}};
    tree.rows.reserve(edges.size());

    // node_of[root] is the linkage node currently representing a union-find set.
    DisjointSet sets(n);
    std::vector<index_t> node_of(n);
    for (index_t i = 0; i < n; ++i) node_of[i] = i;
    std::vector<double> node_size(sample_weights);
    std::vector<index_t> node_count(n, 1);
    node_size.reserve(n + edges.size());
    node_count.reserve(n + edges.size());

    for (const Edge& e : edges) {
        const index_t ru = sets.find(e.u);
        const index_t rv = sets.find(e.v);
        if (ru == rv) throw InputError("spanning forest contains a cycle");
        const index_t left = node_of[ru];
        const index_t right = node_of[rv];
        const double size = node_size[left] + node_size[right];
        const index_t count = node_count[left] + node_count[right];
        tree.rows.push_back(LinkageRow{left, right, e.weight, size, count});
        node_size.push_back(size);
        node_count.push_back(count);
        sets.unite(ru, rv);
        node_of[sets.find(ru)] = n + tree.rows.size() - 1;
    }
    return tree;
}

}  // namespace plscan
