#pragma once

#include <vector>

#include "plscan/condense.hpp"
#include "plscan/types.hpp"

namespace plscan {

/// One condensed-tree cluster, indexed by (cluster id - n). The segment spans
/// distances [d_min, d_max) and is a leaf cluster for every minimum cluster
/// size in (s_min, s_max]. Segments with s_min >= s_max are never leaves.
struct Segment {
    index_t parent = 0;
    double d_min = 0.0;
    double d_max = 0.0;
    double s_min = 0.0;
    double s_max = 0.0;

    bool is_leaf_somewhere() const { return s_min < s_max; }
};

/// Minimum-cluster-size barcode of every condensed-tree segment. Index 0 is
/// the phantom root; it is never reported as a leaf cluster.
struct LeafTree {
    index_t num_points = 0;
    double min_cluster_size = 0.0;  // the condensed tree's initial threshold
    std::vector<Segment> segments;

    index_t size() const { return segments.size(); }
    bool is_leaf(index_t segment) const { return segment != 0 && segments[segment].is_leaf_somewhere(); }
};

/// Walks the sibling pairs from the smallest distance up. Children take the
/// merge distance as d_max and the smaller sibling size as s_max; parents
/// take the largest of that size and both children's s_min as their own
/// s_min. Segments directly below the phantom root end at the largest s_min
/// of the tree; the phantom root spans up to the total sample weight.
LeafTree build_leaf_tree(const CondensedTree& condensed);

/// Segments that are leaf clusters at minimum cluster size m_c, ascending.
std::vector<index_t> leaves_at(const LeafTree& tree, double min_cluster_size);

}  // namespace plscan
