#pragma once

#include <optional>
#include <vector>

#include "plscan/condense.hpp"
#include "plscan/leaf_tree.hpp"
#include "plscan/linkage.hpp"
#include "plscan/persistence.hpp"
#include "plscan/select.hpp"
#include "plscan/spatial_index.hpp"
#include "plscan/types.hpp"

namespace plscan {

struct Options {
    index_t k = 4;
    /// Initial minimum cluster size; defaults to max(k, 2).
    std::optional<double> min_cluster_size;
    Measure measure = Measure::size;
    index_t num_layers = 5;
    TreeKind tree = TreeKind::kd;
    index_t leaf_capacity = 16;
};

/// Leaf tree as parallel arrays, one entry per segment.
struct LeafTreeColumns {
    std::vector<index_t> parent;
    std::vector<double> d_min, d_max, s_min, s_max;
};

/// Every intermediate of one run. Plain data, safe to copy across an API
/// boundary.
struct FitResult {
    std::vector<double> core_distances;  // empty for forest input
    SpanningForest forest;
    LinkageTree linkage;
    CondensedTree condensed;
    LeafTree leaf_tree;
    PersistenceTrace trace;
    std::vector<Layer> layers;
    Clustering clustering;
    std::vector<Clustering> layer_clusterings;  // parallel to layers

    const std::vector<label_t>& labels() const { return clustering.labels; }
    const std::vector<double>& probabilities() const { return clustering.probabilities; }
    const std::vector<double>& trace_min_size() const { return trace.min_size; }
    const std::vector<double>& trace_total() const { return trace.total; }
    std::vector<double> layer_cuts() const;
    LeafTreeColumns leaf_tree_columns() const;
};

double resolve_min_cluster_size(const Options& options);

/// Runs the whole pipeline on feature vectors. Empty weights mean unit
/// weights.
FitResult fit(const PointSet& points, const Options& options, std::vector<double> sample_weights = {});

/// Same, starting from a precomputed mutual-reachability spanning forest.
FitResult fit_forest(const SpanningForest& forest, const Options& options, std::vector<double> sample_weights = {});

/// Forest components (of two or more points) in which no segment is ever a
/// leaf cluster, so none of their points can be labelled.
index_t components_without_leaves(const FitResult& result);

}  // namespace plscan
