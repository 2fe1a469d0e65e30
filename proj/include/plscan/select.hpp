#pragma once

#include <vector>

#include "plscan/condense.hpp"
#include "plscan/leaf_tree.hpp"
#include "plscan/persistence.hpp"
#include "plscan/types.hpp"

namespace plscan {

/// Flat clustering at one minimum-cluster-size cut. Label L belongs to
/// selected_segments[L]; noise is kNoise with probability 0.
struct Clustering {
    std::vector<label_t> labels;
    std::vector<double> probabilities;
    double cut = 0.0;
    std::vector<index_t> selected_segments;

    index_t num_clusters() const { return selected_segments.size(); }
};

/// Breakpoint with the largest total; the smallest one on ties. Returns
/// false when the tree has no leaf clusters at all.
bool best_cut(const PersistenceTrace& trace, const LeafTree& tree, double& cut);

/// Leaf segments alive at the cut (s_min <= cut < s_max), ascending.
std::vector<index_t> selected_at(const LeafTree& tree, double cut);

/// Labels every point after its nearest selected ancestor segment.
/// Probabilities scale the point's join distance between that segment's
/// d_max (0) and d_min (1).
Clustering extract_layer(double cut, const LeafTree& tree, const CondensedTree& condensed);

/// extract_layer at best_cut; an all-noise clustering when no leaf exists.
Clustering select_clusters(const PersistenceTrace& trace, const LeafTree& tree, const CondensedTree& condensed);

}  // namespace plscan
