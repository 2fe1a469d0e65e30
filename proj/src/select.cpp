#include "plscan/select.hpp"

#include <algorithm>

namespace plscan {

bool best_cut(const PersistenceTrace& trace, const LeafTree& tree, double& cut) {
    bool any_leaf = false;
    for (index_t s = 1; s < tree.size() && !any_leaf; ++s) any_leaf = tree.is_leaf(s);
    if (!any_leaf || trace.total.empty()) return false;
    const auto best = std::max_element(trace.total.begin(), trace.total.end());  // first maximum
    cut = trace.min_size[static_cast<index_t>(best - trace.total.begin())];
    return true;
}

std::vector<index_t> selected_at(const LeafTree& tree, double cut) {
    std::vector<index_t> selected;
    for (index_t s = 1; s < tree.size(); ++s) {
        const Segment& seg = tree.segments[s];
        if (seg.s_min <= cut && cut < seg.s_max) selected.push_back(s);
    }
    return selected;
}

Clustering extract_layer(double cut, const LeafTree& tree, const CondensedTree& condensed) {
    const index_t n = condensed.num_points;
    Clustering result;
    result.cut = cut;
    result.selected_segments = selected_at(tree, cut);
    result.labels.assign(n, kNoise);
    result.probabilities.assign(n, 0.0);

    // Parents precede children, so one forward pass resolves inheritance.
    constexpr index_t none = static_cast<index_t>(-1);
    std::vector<index_t> owner(tree.size(), none);
    std::vector<label_t> segment_label(tree.size(), kNoise);
    label_t next = 0;
    auto chosen = result.selected_segments.begin();
    for (index_t s = 1; s < tree.size(); ++s) {
        if (chosen != result.selected_segments.end() && *chosen == s) {
            owner[s] = s;
            segment_label[s] = next++;
            ++chosen;
        } else {
            owner[s] = owner[tree.segments[s].parent];
            segment_label[s] = segment_label[tree.segments[s].parent];
        }
    }

    const auto& rows = condensed.rows;
    const auto count = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < count; ++r) {
        const CondensedRow& row = rows[static_cast<index_t>(r)];
        if (row.child >= n) continue;
        const index_t s = row.parent - n;
        if (owner[s] == none) continue;
        const Segment& seg = tree.segments[owner[s]];
        const double span = seg.d_max - seg.d_min;
        double p = span > 0.0 ? (seg.d_max - row.distance) / span : 1.0;
        result.labels[row.child] = segment_label[s];
        result.probabilities[row.child] = std::clamp(p, 0.0, 1.0);
    }
    return result;
}

Clustering select_clusters(const PersistenceTrace& trace, const LeafTree& tree, const CondensedTree& condensed) {
    double cut = 0.0;
    if (!best_cut(trace, tree, cut)) {
        Clustering empty;
        empty.labels.assign(condensed.num_points, kNoise);
        empty.probabilities.assign(condensed.num_points, 0.0);
        return empty;
    }
    return extract_layer(cut, tree, condensed);
}

}  // namespace plscan
