#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plscan/leaf_tree.hpp"
#include "plscan/spatial_index.hpp"
#include "plscan/types.hpp"

namespace plscan::verify {

struct Check {
    std::string name;
    bool passed = true;
    std::string detail;  // first mismatch when failed
};

bool all_passed(const std::vector<Check>& checks);

/// Isotropic Gaussian blobs with optional uniform background noise.
struct BlobSpec {
    index_t points = 200;  // blob points, noise excluded
    index_t dim = 2;
    index_t centers = 3;
    double spread = 1.0;
    double box = 20.0;            // centres and noise drawn from [-box, box]^dim
    double noise_fraction = 0.0;  // extra noise points as a fraction of the total
    double min_separation = 0.0;  // centres closer than this are redrawn
    std::uint64_t seed = 0;
};

struct Blobs {
    std::vector<double> coords;
    index_t dim = 0;
    std::vector<label_t> truth;  // blob index, kNoise for background points
};

Blobs make_blobs(const BlobSpec& spec);

/// Runs every reference comparison that fits the input size: neighbours and
/// MST (points only), condensation, sweep intervals, size trace and, for
/// n <= 30, the pruning barcode.
std::vector<Check> cross_check_points(const PointSet& points, index_t k, double min_cluster_size,
                                      TreeKind tree = TreeKind::kd);
std::vector<Check> cross_check_forest(const SpanningForest& forest, const std::vector<double>& weights,
                                      double min_cluster_size);

/// Empty when the trees agree (integers exactly, distances within
/// tolerance); otherwise names the first differing segment and field.
std::string diff_leaf_trees(const LeafTree& expected, const LeafTree& actual, double tolerance = 1e-9);

/// Adjusted Rand index between two labelings; kNoise is an ordinary class.
double adjusted_rand_index(const std::vector<label_t>& a, const std::vector<label_t>& b);

}  // namespace plscan::verify
