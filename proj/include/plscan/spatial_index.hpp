#pragma once

#include <span>
#include <vector>

#include "plscan/types.hpp"

namespace plscan {

enum class Metric { euclidean, cosine };
enum class TreeKind { kd, ball };

Metric parse_metric(std::string_view name);
TreeKind parse_tree_kind(std::string_view name);

/// Dense row-major n x dim matrix of finite coordinates plus the metric used
/// to compare rows.
class PointSet {
  public:
    PointSet(std::vector<double> coords, index_t dim, Metric metric = Metric::euclidean);

    index_t size() const { return size_; }
    index_t dim() const { return dim_; }
    Metric metric() const { return metric_; }
    const std::vector<double>& coords() const { return coords_; }
    std::span<const double> point(index_t i) const { return {coords_.data() + i * dim_, dim_}; }

  private:
    std::vector<double> coords_;
    index_t dim_;
    index_t size_;
    Metric metric_;
};

struct Neighbor {
    index_t index;
    double distance;
};

/// Immutable space tree answering exact k-NN queries. Node bounds are either
/// axis-aligned boxes (kd) or balls (ball). Cosine distances are served by a
/// ball tree over unit-normalised copies of the rows.
class SpatialIndex {
  public:
    struct Node {
        index_t begin = 0;  // range into order()
        index_t end = 0;
        index_t left = 0;   // child node ids, valid when !is_leaf
        index_t right = 0;
        index_t min_index = 0;  // smallest original point id in the node
        bool is_leaf = true;
    };

    SpatialIndex(const PointSet& points, TreeKind kind, index_t leaf_capacity = 16);

    index_t size() const { return size_; }
    index_t dim() const { return dim_; }
    Metric metric() const { return metric_; }
    TreeKind kind() const { return kind_; }

    /// Distance under the configured metric.
    double distance(index_t i, index_t j) const;

    /// Lower bound on the metric distance from point `query` to any point in
    /// `node`.
    double lower_bound(index_t query, index_t node) const;

    /// The k nearest points other than `query`, ascending by (distance,
    /// index). Throws InputError when k == 0 or k >= size().
    std::vector<Neighbor> knn(index_t query, index_t k) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    /// Point ids permuted so every node owns a contiguous range.
    const std::vector<index_t>& order() const { return order_; }

  private:
    index_t build(index_t begin, index_t end, index_t leaf_capacity);
    void fit_bounds(index_t node);
    double euclidean_bound(index_t query, index_t node) const;
    void knn_visit(index_t query, index_t node, index_t k, std::vector<Neighbor>& heap) const;

    std::vector<double> coords_;  // normalised rows when metric is cosine
    index_t dim_;
    index_t size_;
    Metric metric_;
    TreeKind kind_;
    std::vector<index_t> order_;
    std::vector<Node> nodes_;
    std::vector<double> lo_, hi_;        // kd bounds, nodes x dim
    std::vector<double> centre_, radius_;  // ball bounds
};

struct CoreDistances {
    std::vector<double> values;
    index_t k = 0;
};

/// Distance from every point to its k-th nearest *other* point. Queries run
/// in parallel; results do not depend on the worker count.
CoreDistances core_distances(const SpatialIndex& index, index_t k);

inline double mutual_reachability(double distance, double core_i, double core_j) {
    double m = distance;
    if (core_i > m) m = core_i;
    if (core_j > m) m = core_j;
    return m;
}

}  // namespace plscan
