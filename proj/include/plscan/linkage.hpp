#pragma once

#include <vector>

#include "plscan/types.hpp"

namespace plscan {

/// One agglomeration step. Row i creates node n + i by joining `left` and
/// `right` (point ids < n, earlier merge nodes >= n). `size` is the summed
/// sample weight of the new node, `count` its number of points.
struct LinkageRow {
    index_t left = 0;
    index_t right = 0;
    double distance = 0.0;
    double size = 0.0;
    index_t count = 0;
};

/// Single-linkage merge sequence. Forest inputs leave one unmerged root per
/// component, so rows.size() == num_points - components.
struct LinkageTree {
    index_t num_points = 0;
    std::vector<LinkageRow> rows;

    index_t node_count() const { return num_points + rows.size(); }
};

/// Kruskal-order union-find over the forest edges (stable sort by
/// (weight, u, v)).
LinkageTree single_linkage(const SpanningForest& forest, const std::vector<double>& sample_weights);

}  // namespace plscan
