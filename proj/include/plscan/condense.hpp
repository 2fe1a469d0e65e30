#pragma once

#include <vector>

#include "plscan/linkage.hpp"
#include "plscan/types.hpp"

namespace plscan {

/// Row of the condensed tree: `child` (a point id < n, or a cluster id >= n)
/// hangs below cluster `parent` from `distance` down. `size` is the child's
/// summed sample weight.
struct CondensedRow {
    index_t parent = 0;
    index_t child = 0;
    double distance = 0.0;
    double size = 0.0;
};

/// Linkage hierarchy simplified at an initial minimum cluster size.
///
/// Cluster id n is the phantom root standing for the whole dataset; it owns
/// points that are pruned before their component ever splits, and every
/// component that does split gets its own cluster id below it. Rows are
/// stored in non-increasing distance order, every point appears exactly
/// once as a child, and cluster rows come in adjacent sibling pairs whose ids
/// are consecutive. Cluster ids are handed out top-down, so a parent's id is
/// always smaller than its children's.
struct CondensedTree {
    index_t num_points = 0;
    double min_cluster_size = 0.0;
    std::vector<CondensedRow> rows;
    /// Row index of the first row of every sibling pair, ascending.
    std::vector<index_t> cluster_pairs;

    /// Number of cluster ids in use, phantom root included.
    index_t num_segments() const { return max_cluster_id() - num_points + 1; }
    /// Ids are allocated in pair order, so the last pair holds the largest.
    index_t max_cluster_id() const { return cluster_pairs.empty() ? num_points : rows[cluster_pairs.back() + 1].child; }
};

/// Single distance-descending pass over the linkage tree. Branches whose
/// weight falls below `min_cluster_size` have their points written into rows
/// reserved under the surviving ancestor, at the distance where the branch
/// was cut off; merges with both sides at or above the threshold start two
/// new clusters. Requires min_cluster_size > max sample weight.
CondensedTree condense_tree(const LinkageTree& linkage, const std::vector<double>& sample_weights,
                            double min_cluster_size);

}  // namespace plscan
