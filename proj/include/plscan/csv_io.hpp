#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "plscan/condense.hpp"
#include "plscan/leaf_tree.hpp"
#include "plscan/persistence.hpp"
#include "plscan/select.hpp"
#include "plscan/types.hpp"

namespace plscan::io {

enum class InputKind { points, forest };

struct PointsTable {
    std::vector<double> coords;  // row-major
    index_t dim = 0;
    index_t rows = 0;
};

/// Forest files start with the mandatory header `u,v,weight`.
InputKind detect_kind(std::istream& in);

/// One point per line; a first line that is not numeric is taken as a header.
/// Errors name the offending line.
PointsTable read_points(std::istream& in);

/// Edge list under a `u,v,weight` header. `num_points` of 0 means
/// max id + 1.
SpanningForest read_forest(std::istream& in, index_t num_points = 0);

/// One weight per line, optional header.
std::vector<double> read_weights(std::istream& in);

/// `%.<p>g` with p = 9 unless PLSCAN_PRECISION holds a value in [1, 17].
std::string format_real(double value);

void write_labels(std::ostream& out, const Clustering& clustering);
void write_trace(std::ostream& out, const PersistenceTrace& trace);
void write_layers(std::ostream& out, const std::vector<Layer>& layers);
void write_leaf_tree(std::ostream& out, const LeafTree& tree);
void write_condensed(std::ostream& out, const CondensedTree& tree);

/// Parses a file written by write_leaf_tree.
LeafTree read_leaf_tree(std::istream& in);

}  // namespace plscan::io
