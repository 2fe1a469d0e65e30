#pragma once

#include <span>
#include <vector>

#include "plscan/condense.hpp"
#include "plscan/leaf_tree.hpp"
#include "plscan/types.hpp"

namespace plscan {

/// Total persistence of the alive leaves as a step function of the minimum
/// cluster size. total[i] holds on the threshold interval
/// (min_size[i], min_size[i + 1]]: it sums over the leaves with
/// s_min <= min_size[i] < s_max.
struct PersistenceTrace {
    Measure measure = Measure::size;
    std::vector<double> min_size;  // strictly ascending breakpoints
    std::vector<double> total;
};

/// A flat clustering worth inspecting: a local maximum of the trace.
struct Layer {
    double cut = 0.0;
    double total = 0.0;
};

inline double size_persistence(double s_min, double s_max) { return s_max - s_min; }

/// Density in [0, 1] for a mutual-reachability distance.
double lambda_of(double distance);

/// Points that belong to each leaf-capable segment: its own point rows plus
/// those of every descendant segment, ordered by joining distance with
/// running weight totals.
class LeafMembers {
  public:
    LeafMembers(const LeafTree& tree, const CondensedTree& condensed);

    std::span<const index_t> points(index_t segment) const;
    std::span<const double> distances(index_t segment) const;
    std::span<const double> cumulative_weight(index_t segment) const;

    /// Smallest joining distance at which the members' running weight reaches
    /// m_c. Falls back to the segment's d_max when the members never do.
    double birth_distance(index_t segment, double min_cluster_size) const;

    /// Integral of the distance (or density) persistence over the segment's
    /// size lifetime (s_min, s_max].
    double distance_area(index_t segment) const;
    double density_area(index_t segment) const;

  private:
    struct Range {
        index_t begin = 0;
        index_t end = 0;
    };
    template <typename F>
    double area(index_t segment, F&& persistence) const;

    const LeafTree* tree_;
    std::vector<Range> ranges_;
    std::vector<index_t> points_;
    std::vector<double> distances_;
    std::vector<double> cumulative_;
};

/// birth_distance for a single segment; throws std::logic_error when the
/// segment is not alive at m_c.
double birth_distance(index_t segment, double min_cluster_size, const CondensedTree& condensed,
                      const LeafTree& tree);

PersistenceTrace persistence_trace(const LeafTree& tree, const CondensedTree& condensed, Measure measure);

/// Value of the trace at an arbitrary threshold (the step holding m_c).
double trace_value_at(const PersistenceTrace& trace, double min_cluster_size);

/// Local maxima of the trace, plateaus reported at their smallest
/// breakpoint, ranked by total (ties: smaller cut first). At most top_n.
std::vector<Layer> find_layers(const PersistenceTrace& trace, index_t top_n);

}  // namespace plscan
