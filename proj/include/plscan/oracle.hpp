#pragma once

// Brute-force reference implementations. They share data types with the
// library but none of its algorithms, and exist to cross-check it.

#include <string>
#include <vector>

#include "plscan/condense.hpp"
#include "plscan/leaf_tree.hpp"
#include "plscan/linkage.hpp"
#include "plscan/spatial_index.hpp"
#include "plscan/types.hpp"

namespace plscan::oracle {

/// Pairwise distance computed from the raw coordinates.
double distance(const PointSet& points, index_t i, index_t j);

/// k nearest other points by full scan, ascending (distance, index).
std::vector<Neighbor> knn(const PointSet& points, index_t query, index_t k);
std::vector<double> core_distances(const PointSet& points, index_t k);

/// Quadratic Prim over the complete mutual-reachability graph.
SpanningForest prim_mst(const PointSet& points, const std::vector<double>& core);

double total_weight(const SpanningForest& forest);
/// Sorted edge weights; every minimum spanning tree of a graph has the same.
std::vector<double> weight_multiset(const SpanningForest& forest);

/// Top-down breadth-first condensation. Rows are complete but unordered and
/// cluster_pairs is left empty.
CondensedTree bfs_condense(const LinkageTree& linkage, const std::vector<double>& weights, double min_cluster_size);

/// Order-free description of a condensed tree: clusters are named by the
/// set of points below them, the phantom root by an empty set.
struct CanonicalRow {
    std::vector<index_t> parent;  // empty for the phantom root
    bool child_is_point = false;
    std::vector<index_t> child;   // {point} or the cluster's points
    double distance = 0.0;
    double size = 0.0;

    auto operator<=>(const CanonicalRow&) const = default;
};
std::vector<CanonicalRow> canonical_rows(const CondensedTree& tree);

/// A leaf cluster and the minimum-cluster-size range (birth, death] in
/// which it exists.
struct LeafInterval {
    double birth = 0.0;
    double death = 0.0;
    std::vector<index_t> points;

    auto operator<=>(const LeafInterval&) const = default;
};

/// Condenses once per integer threshold m in [m_c, n + 1] and stitches leaves
/// with identical point sets into intervals. Components without a split at
/// m count as leaves while some other component still splits, provided they
/// split at m_c. Intended for unit weights.
std::vector<LeafInterval> leaf_lifetimes_by_sweep(const LinkageTree& linkage, const std::vector<double>& weights,
                                                  double min_cluster_size);

/// The same intervals read off a leaf tree, named by the points under each
/// segment. Segments that are never leaves are skipped.
std::vector<LeafInterval> leaf_tree_intervals(const LeafTree& tree, const CondensedTree& condensed);

/// Ultrametric on n points plus n noise elements: elements 0..n-1 are the
/// points, n..2n-1 their noise counterparts. Unreachable pairs hold infinity.
struct PruningMetricSpace {
    index_t num_points = 0;
    double min_cluster_size = 0.0;
    std::vector<double> dist;  // (2n) x (2n), row-major

    double at(index_t a, index_t b) const { return dist[a * 2 * num_points + b]; }
};

PruningMetricSpace build_pruning_space(const LinkageTree& linkage, const std::vector<double>& weights,
                                       double min_cluster_size);

/// Empty when the ultrametric inequality holds for every triple, otherwise a
/// description of the first violation.
std::string ultrametric_violation(const PruningMetricSpace& space);

struct Bar {
    double birth = 0.0;
    double death = 0.0;

    auto operator<=>(const Bar&) const = default;
};

/// Zero-dimensional barcode of leaf components in the Vietoris-Rips
/// filtration of the space. A component is a leaf while it holds a point
/// whose noise element lies outside it; a merge of two leaf components starts
/// a new bar. Bars are reported as threshold ranges (birth, death], sorted.
/// Throws std::logic_error when the space is not ultrametric.
std::vector<Bar> pruning_barcode(const PruningMetricSpace& space);

/// Sorted (s_min, s_max] ranges of the leaf segments.
std::vector<Bar> leaf_tree_bars(const LeafTree& tree);

/// Total size persistence of the leaves alive at each integer threshold
/// m in [m_c + 1, n], computed from sweep intervals. Entry i is for m_c + 1 + i.
std::vector<double> size_trace_by_sweep(const std::vector<LeafInterval>& intervals, double min_cluster_size,
                                        index_t num_points);

/// Labels at the integer threshold with the largest size trace (smallest on
/// ties). Clusters are numbered by their smallest point id; noise is kNoise.
std::vector<label_t> best_cut_labels(const std::vector<LeafInterval>& intervals, double min_cluster_size,
                                     index_t num_points, double* best_threshold = nullptr);

/// Renumbers labels by first occurrence so partitions compare directly.
std::vector<label_t> canonical_labels(const std::vector<label_t>& labels);

}  // namespace plscan::oracle
