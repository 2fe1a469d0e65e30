#include "plscan/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace plscan {

double lambda_of(double distance) { return std::exp(-distance); }

LeafMembers::LeafMembers(const LeafTree& tree, const CondensedTree& condensed) : tree_(&tree) {
    const index_t n = condensed.num_points;
    const index_t segments = tree.size();

    // Point rows grouped by their parent segment (CSR layout).
    std::vector<index_t> row_offset(segments + 1, 0);
    for (const auto& row : condensed.rows) {
        if (row.child < n) ++row_offset[row.parent - n + 1];
    }
    std::partial_sum(row_offset.begin(), row_offset.end(), row_offset.begin());
    std::vector<index_t> point_rows(row_offset.back());
    {
        std::vector<index_t> fill(row_offset.begin(), row_offset.end() - 1);
        for (index_t r = 0; r < condensed.rows.size(); ++r) {
            const auto& row = condensed.rows[r];
            if (row.child < n) point_rows[fill[row.parent - n]++] = r;
        }
    }

    std::vector<std::vector<index_t>> children(segments);
    std::vector<index_t> subtree_count(segments, 0);
    for (index_t s = 1; s < segments; ++s) children[tree.segments[s].parent].push_back(s);
    for (index_t s = segments; s-- > 1;) {
        subtree_count[s] += row_offset[s + 1] - row_offset[s];
        subtree_count[tree.segments[s].parent] += subtree_count[s];
    }

    ranges_.assign(segments, Range{});
    index_t total = 0;
    for (index_t s = 1; s < segments; ++s) {
        if (!tree.is_leaf(s)) continue;
        ranges_[s] = Range{total, total + subtree_count[s]};
        total += subtree_count[s];
    }
    points_.resize(total);
    distances_.resize(total);
    cumulative_.resize(total);

    const auto count = static_cast<std::int64_t>(segments);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t si = 1; si < count; ++si) {
        const auto s = static_cast<index_t>(si);
        if (!tree.is_leaf(s)) continue;
        std::vector<std::pair<double, index_t>> members;  // (distance, row)
        members.reserve(ranges_[s].end - ranges_[s].begin);
        std::vector<index_t> stack{s};
        while (!stack.empty()) {
            const index_t current = stack.back();
            stack.pop_back();
            for (index_t k = row_offset[current]; k < row_offset[current + 1]; ++k) {
                const index_t r = point_rows[k];
                members.emplace_back(condensed.rows[r].distance, r);
            }
            stack.insert(stack.end(), children[current].begin(), children[current].end());
        }
        std::sort(members.begin(), members.end(), [&](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return condensed.rows[a.second].child < condensed.rows[b.second].child;
        });
        double running = 0.0;
        index_t out = ranges_[s].begin;
        for (const auto& [distance, r] : members) {
            running += condensed.rows[r].size;
            points_[out] = condensed.rows[r].child;
            distances_[out] = distance;
            cumulative_[out] = running;
            ++out;
        }
    }
}

std::span<const index_t> LeafMembers::points(index_t segment) const {
    const Range r = ranges_.at(segment);
    return {points_.data() + r.begin, r.end - r.begin};
}

std::span<const double> LeafMembers::distances(index_t segment) const {
    const Range r = ranges_.at(segment);
    return {distances_.data() + r.begin, r.end - r.begin};
}

std::span<const double> LeafMembers::cumulative_weight(index_t segment) const {
    const Range r = ranges_.at(segment);
    return {cumulative_.data() + r.begin, r.end - r.begin};
}

double LeafMembers::birth_distance(index_t segment, double min_cluster_size) const {
    const auto cumulative = cumulative_weight(segment);
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), min_cluster_size);
    if (it == cumulative.end()) return tree_->segments[segment].d_max;
    return distances(segment)[static_cast<index_t>(it - cumulative.begin())];
}

template <typename F>
double LeafMembers::area(index_t segment, F&& persistence) const {
    // birth(m) equals distances[j] for m in (cumulative[j-1], cumulative[j]].
    const Segment& seg = tree_->segments[segment];
    const auto cumulative = cumulative_weight(segment);
    const auto dist = distances(segment);
    double sum = 0.0;
    double previous = 0.0;
    for (index_t j = 0; j < cumulative.size() && previous < seg.s_max; ++j) {
        const double lo = std::max(previous, seg.s_min);
        const double hi = std::min(cumulative[j], seg.s_max);
        if (hi > lo) sum += (hi - lo) * persistence(dist[j]);
        previous = cumulative[j];
    }
    return sum;
}

double LeafMembers::distance_area(index_t segment) const {
    const double d_max = tree_->segments[segment].d_max;
    return area(segment, [d_max](double birth) { return d_max - birth; });
}

double LeafMembers::density_area(index_t segment) const {
    const double floor = lambda_of(tree_->segments[segment].d_max);
    return area(segment, [floor](double birth) { return lambda_of(birth) - floor; });
}

double birth_distance(index_t segment, double min_cluster_size, const CondensedTree& condensed,
                      const LeafTree& tree) {
    if (!tree.is_leaf(segment) || min_cluster_size < tree.segments[segment].s_min ||
        min_cluster_size > tree.segments[segment].s_max) {
        throw std::logic_error("segment " + std::to_string(segment) + " is not alive at minimum cluster size " +
                               std::to_string(min_cluster_size));
    }
    return LeafMembers(tree, condensed).birth_distance(segment, min_cluster_size);
}

namespace {

std::vector<double> breakpoints_of(const LeafTree& tree) {
    std::vector<double> values;
    values.reserve(2 * tree.size());
    for (const auto& s : tree.segments) {
        values.push_back(s.s_min);
        values.push_back(s.s_max);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

}  // namespace

PersistenceTrace persistence_trace(const LeafTree& tree, const CondensedTree& condensed, Measure measure) {
    PersistenceTrace trace;
    trace.measure = measure;
    trace.min_size = breakpoints_of(tree);
    trace.total.assign(trace.min_size.size(), 0.0);
    const auto& bp = trace.min_size;

    auto index_of = [&](double value) {
        return static_cast<index_t>(std::lower_bound(bp.begin(), bp.end(), value) - bp.begin());
    };

    const index_t segments = tree.size();
    const bool per_breakpoint = measure == Measure::distance || measure == Measure::density;
    const bool needs_members = measure != Measure::size;

    // Per-leaf contributions are computed independently, then summed in
    // segment order so totals do not depend on the worker count.
    std::vector<double> constant(segments, 0.0);
    std::vector<std::vector<double>> varying(per_breakpoint ? segments : 0);
    std::optional<LeafMembers> members;
    if (needs_members) members.emplace(tree, condensed);

    const auto count = static_cast<std::int64_t>(segments);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t si = 1; si < count; ++si) {
        const auto s = static_cast<index_t>(si);
        if (!tree.is_leaf(s)) continue;
        const Segment& seg = tree.segments[s];
        switch (measure) {
            case Measure::size:
                constant[s] = size_persistence(seg.s_min, seg.s_max);
                break;
            case Measure::size_distance:
                constant[s] = members->distance_area(s);
                break;
            case Measure::size_density:
                constant[s] = members->density_area(s);
                break;
            case Measure::distance:
            case Measure::density: {
                const index_t lo = index_of(seg.s_min);
                const index_t hi = index_of(seg.s_max);
                auto& values = varying[s];
                values.reserve(hi - lo);
                for (index_t b = lo; b < hi; ++b) {
                    const double birth = members->birth_distance(s, bp[b]);
                    values.push_back(measure == Measure::distance ? seg.d_max - birth
                                                                  : lambda_of(birth) - lambda_of(seg.d_max));
                }
                break;
            }
        }
    }

    for (index_t s = 1; s < segments; ++s) {
        if (!tree.is_leaf(s)) continue;
        const index_t lo = index_of(tree.segments[s].s_min);
        const index_t hi = index_of(tree.segments[s].s_max);
        for (index_t b = lo; b < hi; ++b) {
            trace.total[b] += per_breakpoint ? varying[s][b - lo] : constant[s];
        }
    }
    return trace;
}

double trace_value_at(const PersistenceTrace& trace, double min_cluster_size) {
    const auto& bp = trace.min_size;
    const auto it = std::lower_bound(bp.begin(), bp.end(), min_cluster_size);
    if (it == bp.begin()) return 0.0;
    return trace.total[static_cast<index_t>(it - bp.begin()) - 1];
}

std::vector<Layer> find_layers(const PersistenceTrace& trace, index_t top_n) {
    if (top_n == 0) throw InputError("the number of layers must be at least 1");
    std::vector<Layer> layers;
    const auto& total = trace.total;
    const index_t count = total.size();
    for (index_t begin = 0; begin < count;) {
        index_t end = begin + 1;
        while (end < count && total[end] == total[begin]) ++end;
        const bool above_left = begin == 0 || total[begin] > total[begin - 1];
        const bool above_right = end == count || total[begin] > total[end];
        if (above_left && above_right) layers.push_back(Layer{trace.min_size[begin], total[begin]});
        begin = end;
    }
    std::stable_sort(layers.begin(), layers.end(), [](const Layer& a, const Layer& b) {
        if (a.total != b.total) return a.total > b.total;
        return a.cut < b.cut;
    });
    if (layers.size() > top_n) layers.resize(top_n);
    return layers;
}

}  // namespace plscan
