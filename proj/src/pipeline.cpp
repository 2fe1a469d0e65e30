#include "plscan/pipeline.hpp"

#include <algorithm>
#include <string>

#include "plscan/mst.hpp"
#include "plscan/union_find.hpp"

namespace plscan {

std::vector<double> FitResult::layer_cuts() const {
    std::vector<double> cuts;
    cuts.reserve(layers.size());
    for (const auto& layer : layers) cuts.push_back(layer.cut);
    return cuts;
}

LeafTreeColumns FitResult::leaf_tree_columns() const {
    LeafTreeColumns columns;
    for (const auto& s : leaf_tree.segments) {
        columns.parent.push_back(s.parent);
        columns.d_min.push_back(s.d_min);
        columns.d_max.push_back(s.d_max);
        columns.s_min.push_back(s.s_min);
        columns.s_max.push_back(s.s_max);
    }
    return columns;
}

double resolve_min_cluster_size(const Options& options) {
    if (options.min_cluster_size) return *options.min_cluster_size;
    return static_cast<double>(std::max<index_t>(options.k, 2));
}

namespace {

void finish(FitResult& result, const Options& options, const std::vector<double>& weights) {
    if (options.num_layers == 0) throw InputError("the number of layers must be at least 1");
    const double m_c = resolve_min_cluster_size(options);
    if (!(m_c >= 2.0)) throw InputError("minimum cluster size must be at least 2, got " + std::to_string(m_c));
    result.linkage = single_linkage(result.forest, weights);
    result.condensed = condense_tree(result.linkage, weights, m_c);
    result.leaf_tree = build_leaf_tree(result.condensed);
    result.trace = persistence_trace(result.leaf_tree, result.condensed, options.measure);
    result.layers = find_layers(result.trace, options.num_layers);
    result.clustering = select_clusters(result.trace, result.leaf_tree, result.condensed);
    for (const auto& layer : result.layers) {
        result.layer_clusterings.push_back(extract_layer(layer.cut, result.leaf_tree, result.condensed));
    }
}

}  // namespace

FitResult fit(const PointSet& points, const Options& options, std::vector<double> sample_weights) {
    if (sample_weights.empty()) sample_weights = unit_weights(points.size());
    validate_sample_weights(sample_weights, points.size());
    if (options.leaf_capacity == 0) throw InputError("leaf capacity must be at least 1");
    FitResult result;
    const SpatialIndex index(points, options.tree, options.leaf_capacity);
    const CoreDistances core = core_distances(index, options.k);
    result.forest = build_mst(index, core);
    result.core_distances = core.values;
    finish(result, options, sample_weights);
    return result;
}

FitResult fit_forest(const SpanningForest& forest, const Options& options, std::vector<double> sample_weights) {
    if (sample_weights.empty()) sample_weights = unit_weights(forest.num_points);
    validate_sample_weights(sample_weights, forest.num_points);
    FitResult result;
    result.forest = forest;
    finish(result, options, sample_weights);
    return result;
}

index_t components_without_leaves(const FitResult& result) {
    const index_t n = result.forest.num_points;
    DisjointSet components(n);
    for (const auto& e : result.forest.edges) components.unite(e.u, e.v);

    const auto& segments = result.leaf_tree.segments;
    std::vector<char> leaf_below(segments.size(), 0);
    for (index_t s = segments.size(); s-- > 1;) {
        if (result.leaf_tree.is_leaf(s)) leaf_below[s] = 1;
        if (leaf_below[s] && segments[s].parent != 0) leaf_below[segments[s].parent] = 1;
    }
    std::vector<index_t> top(segments.size(), 0);
    for (index_t s = 1; s < segments.size(); ++s) top[s] = segments[s].parent == 0 ? s : top[segments[s].parent];

    std::vector<index_t> members(n, 0);
    std::vector<char> has_leaf(n, 0);
    for (index_t p = 0; p < n; ++p) ++members[components.find(p)];
    for (const auto& row : result.condensed.rows) {
        if (row.child >= n || row.parent == n) continue;
        if (leaf_below[top[row.parent - n]]) has_leaf[components.find(row.child)] = 1;
    }
    index_t missing = 0;
    for (index_t p = 0; p < n; ++p) {
        if (components.find(p) == p && members[p] >= 2 && !has_leaf[p]) ++missing;
    }
    return missing;
}

}  // namespace plscan
