#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace plscan {

using index_t = std::size_t;
using label_t = std::int64_t;

inline constexpr label_t kNoise = -1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised for malformed or out-of-contract user input.
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Weighted undirected edge. Producers keep `u < v`.
struct Edge {
    index_t u = 0;
    index_t v = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Total order used for tie-breaking everywhere edges are ranked:
/// weight first, then (min endpoint, max endpoint).
inline bool edge_less(const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
}

/// Mutual-reachability minimum spanning forest.
struct SpanningForest {
    index_t num_points = 0;
    std::vector<Edge> edges;

    index_t num_components() const { return num_points - edges.size(); }
};

enum class Measure { size, distance, density, size_distance, size_density };

Measure parse_measure(std::string_view name);
std::string_view to_string(Measure measure);

/// All-ones weights, the default when the caller supplies none.
inline std::vector<double> unit_weights(index_t n) { return std::vector<double>(n, 1.0); }

/// Throws InputError unless there are n finite, strictly positive weights.
void validate_sample_weights(const std::vector<double>& weights, index_t n);

}  // namespace plscan
