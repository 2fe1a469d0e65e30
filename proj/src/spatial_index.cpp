#include "plscan/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace plscan {

namespace {

// Computed distances carry a few ulps of rounding error; bounds are shrunk by
// this much so they never exceed a distance they are meant to bound.
constexpr double kBoundSlack = 1e-10;

bool neighbor_less(const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
}

}  // namespace

Metric parse_metric(std::string_view name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "cosine") return Metric::cosine;
    throw InputError("unknown metric '" + std::string(name) + "' (expected euclidean or cosine)");
}

TreeKind parse_tree_kind(std::string_view name) {
    if (name == "kd") return TreeKind::kd;
    if (name == "ball") return TreeKind::ball;
    throw InputError("unknown tree kind '" + std::string(name) + "' (expected kd or ball)");
}

PointSet::PointSet(std::vector<double> coords, index_t dim, Metric metric)
    : coords_(std::move(coords)), dim_(dim), size_(0), metric_(metric) {
    if (dim_ == 0) throw InputError("points need at least one dimension");
    if (coords_.size() % dim_ != 0) throw InputError("coordinate count is not a multiple of the dimension");
    size_ = coords_.size() / dim_;
    if (size_ < 2) throw InputError("at least two points are required");
    for (index_t i = 0; i < coords_.size(); ++i) {
        if (!std::isfinite(coords_[i])) {
            throw InputError("non-finite coordinate at point " + std::to_string(i / dim_) + ", column " +
                             std::to_string(i % dim_));
        }
    }
}

SpatialIndex::SpatialIndex(const PointSet& points, TreeKind kind, index_t leaf_capacity)
    : coords_(points.coords()),
      dim_(points.dim()),
      size_(points.size()),
      metric_(points.metric()),
      kind_(kind) {
    if (leaf_capacity == 0) throw InputError("leaf capacity must be at least 1");
    if (metric_ == Metric::cosine) {
        if (kind_ == TreeKind::kd) throw InputError("kd trees only support the euclidean metric; use a ball tree");
        for (index_t i = 0; i < size_; ++i) {
            double* row = coords_.data() + i * dim_;
            double norm = 0.0;
            for (index_t d = 0; d < dim_; ++d) norm += row[d] * row[d];
            norm = std::sqrt(norm);
            if (norm == 0.0) throw InputError("cosine distance is undefined for the zero vector at point " + std::to_string(i));
            for (index_t d = 0; d < dim_; ++d) row[d] /= norm;
        }
    }
    order_.resize(size_);
    std::iota(order_.begin(), order_.end(), index_t{0});
    nodes_.reserve(2 * (size_ / leaf_capacity + 1));
    build(0, size_, leaf_capacity);
}

index_t SpatialIndex::build(index_t begin, index_t end, index_t leaf_capacity) {
    const index_t id = nodes_.size();
    nodes_.push_back(Node{begin, end, 0, 0, 0, true});
    lo_.resize(nodes_.size() * dim_);
    hi_.resize(nodes_.size() * dim_);
    centre_.resize(nodes_.size() * dim_);
    radius_.resize(nodes_.size());
    fit_bounds(id);

    nodes_[id].min_index = *std::min_element(order_.begin() + begin, order_.begin() + end);
    if (end - begin <= leaf_capacity) return id;

    index_t split_dim = 0;
    double widest = -1.0;
    for (index_t d = 0; d < dim_; ++d) {
        const double spread = hi_[id * dim_ + d] - lo_[id * dim_ + d];
        if (spread > widest) {
            widest = spread;
            split_dim = d;
        }
    }
    if (widest <= 0.0) return id;  // all points coincide

    const index_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](index_t a, index_t b) {
                         const double ca = coords_[a * dim_ + split_dim];
                         const double cb = coords_[b * dim_ + split_dim];
                         return ca != cb ? ca < cb : a < b;
                     });
    const index_t left = build(begin, mid, leaf_capacity);
    const index_t right = build(mid, end, leaf_capacity);
    nodes_[id].left = left;
    nodes_[id].right = right;
    nodes_[id].is_leaf = false;
    return id;
}

void SpatialIndex::fit_bounds(index_t node) {
    const auto [begin, end] = std::pair{nodes_[node].begin, nodes_[node].end};
    double* lo = lo_.data() + node * dim_;
    double* hi = hi_.data() + node * dim_;
    double* centre = centre_.data() + node * dim_;
    std::fill(lo, lo + dim_, kInfinity);
    std::fill(hi, hi + dim_, -kInfinity);
    std::fill(centre, centre + dim_, 0.0);
    for (index_t i = begin; i < end; ++i) {
        const double* p = coords_.data() + order_[i] * dim_;
        for (index_t d = 0; d < dim_; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
            centre[d] += p[d];
        }
    }
    const double count = static_cast<double>(end - begin);
    for (index_t d = 0; d < dim_; ++d) centre[d] /= count;
    double radius = 0.0;
    for (index_t i = begin; i < end; ++i) {
        const double* p = coords_.data() + order_[i] * dim_;
        double sq = 0.0;
        for (index_t d = 0; d < dim_; ++d) sq += (p[d] - centre[d]) * (p[d] - centre[d]);
        radius = std::max(radius, std::sqrt(sq));
    }
    radius_[node] = radius;
}

double SpatialIndex::distance(index_t i, index_t j) const {
    const double* a = coords_.data() + i * dim_;
    const double* b = coords_.data() + j * dim_;
    if (metric_ == Metric::cosine) {
        double dot = 0.0;
        for (index_t d = 0; d < dim_; ++d) dot += a[d] * b[d];
        return std::max(0.0, 1.0 - dot);
    }
    double sq = 0.0;
    for (index_t d = 0; d < dim_; ++d) {
        const double diff = a[d] - b[d];
        sq += diff * diff;
    }
    return std::sqrt(sq);
}

double SpatialIndex::euclidean_bound(index_t query, index_t node) const {
    const double* q = coords_.data() + query * dim_;
    if (kind_ == TreeKind::kd) {
        const double* lo = lo_.data() + node * dim_;
        const double* hi = hi_.data() + node * dim_;
        double sq = 0.0;
        for (index_t d = 0; d < dim_; ++d) {
            double gap = 0.0;
            if (q[d] < lo[d]) gap = lo[d] - q[d];
            else if (q[d] > hi[d]) gap = q[d] - hi[d];
            sq += gap * gap;
        }
        return std::sqrt(sq) * (1.0 - kBoundSlack);
    }
    const double* c = centre_.data() + node * dim_;
    double sq = 0.0;
    for (index_t d = 0; d < dim_; ++d) sq += (q[d] - c[d]) * (q[d] - c[d]);
    const double to_centre = std::sqrt(sq);
    const double r = radius_[node];
    return std::max(0.0, to_centre - r - kBoundSlack * (to_centre + r));
}

double SpatialIndex::lower_bound(index_t query, index_t node) const {
    const double e = euclidean_bound(query, node);
    if (metric_ == Metric::cosine) {
        // For unit vectors 1 - <a, b> = |a - b|^2 / 2.
        return std::max(0.0, 0.5 * e * e - kBoundSlack);
    }
    return e;
}

void SpatialIndex::knn_visit(index_t query, index_t node, index_t k, std::vector<Neighbor>& heap) const {
    const Node& n = nodes_[node];
    if (heap.size() == k) {
        const double lb = lower_bound(query, node);
        const Neighbor& worst = heap.front();
        if (lb > worst.distance || (lb == worst.distance && n.min_index > worst.index)) return;
    }
    if (n.is_leaf) {
        for (index_t i = n.begin; i < n.end; ++i) {
            const index_t other = order_[i];
            if (other == query) continue;
            const Neighbor candidate{other, distance(query, other)};
            if (heap.size() < k) {
                heap.push_back(candidate);
                std::push_heap(heap.begin(), heap.end(), neighbor_less);
            } else if (neighbor_less(candidate, heap.front())) {
                std::pop_heap(heap.begin(), heap.end(), neighbor_less);
                heap.back() = candidate;
                std::push_heap(heap.begin(), heap.end(), neighbor_less);
            }
        }
        return;
    }
    index_t first = n.left;
    index_t second = n.right;
    if (lower_bound(query, second) < lower_bound(query, first)) std::swap(first, second);
    knn_visit(query, first, k, heap);
    knn_visit(query, second, k, heap);
}

std::vector<Neighbor> SpatialIndex::knn(index_t query, index_t k) const {
    if (k == 0) throw InputError("k-NN queries need k >= 1");
    if (k >= size_) {
        throw InputError("k = " + std::to_string(k) + " must be smaller than the number of points (" +
                         std::to_string(size_) + ")");
    }
    std::vector<Neighbor> heap;
    heap.reserve(k);
    knn_visit(query, 0, k, heap);
    std::sort_heap(heap.begin(), heap.end(), neighbor_less);
    return heap;
}

CoreDistances core_distances(const SpatialIndex& index, index_t k) {
    const index_t n = index.size();
    if (k == 0 || k >= n) {
        throw InputError("k = " + std::to_string(k) + " must lie in [1, n - 1] with n = " + std::to_string(n));
    }
    CoreDistances core{std::vector<double>(n), k};
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < count; ++i) {
        const index_t q = index.order()[static_cast<index_t>(i)];  // tree order for locality
        core.values[q] = index.knn(q, k).back().distance;
    }
    return core;
}

}  // namespace plscan
