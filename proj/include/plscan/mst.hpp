#pragma once

#include <vector>

#include "plscan/spatial_index.hpp"
#include "plscan/types.hpp"

namespace plscan {

/// Minimum spanning tree of the complete mutual-reachability graph, built with
/// Borůvka rounds whose nearest-foreign-neighbour searches run in parallel on
/// the space tree. Equal weights are ranked by (min endpoint, max endpoint),
/// so the output is unique and independent of the worker count. Edges are
/// returned sorted by that order.
SpanningForest build_mst(const SpatialIndex& index, const CoreDistances& core);

/// Accepts a caller-supplied minimum spanning forest. Weights are taken as
/// mutual-reachability distances as-is. Rejects out-of-range ids, negative or
/// non-finite weights, duplicate edges and cycles.
SpanningForest from_precomputed(std::vector<Edge> edges, index_t num_points);

}  // namespace plscan
