#include "plscan/leaf_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace plscan {

LeafTree build_leaf_tree(const CondensedTree& condensed) {
    const index_t n = condensed.num_points;
    const auto& rows = condensed.rows;
    const double initial = condensed.min_cluster_size;
    const double top = rows.empty() ? 0.0 : rows.front().distance;

    for (index_t pair : condensed.cluster_pairs) {
        const CondensedRow& first = rows.at(pair);
        const CondensedRow& second = rows.at(pair + 1);
        if (first.child < n || second.child != first.child + 1 || second.parent != first.parent) {
            throw std::logic_error("condensed tree sibling rows are not adjacent");
        }
    }

    LeafTree tree;
    tree.num_points = n;
    tree.min_cluster_size = initial;
    tree.segments.assign(condensed.num_segments(), Segment{0, 0.0, top, initial, 0.0});

    double total_weight = 0.0;
    for (const auto& row : rows) {
        tree.segments[row.parent - n].d_min = row.distance;  // rows descend, so the last one wins
        if (row.child < n) total_weight += row.size;
    }
    tree.segments[0].s_max = total_weight;

    auto& seg = tree.segments;
    for (auto it = condensed.cluster_pairs.rbegin(); it != condensed.cluster_pairs.rend(); ++it) {
        const CondensedRow& first = rows[*it];
        const CondensedRow& second = rows[*it + 1];
        const index_t left = first.child - n;
        const index_t right = second.child - n;
        const index_t parent = first.parent - n;
        const double size = std::min(first.size, second.size);
        for (index_t child : {left, right}) {
            seg[child].parent = parent;
            seg[child].d_max = first.distance;
            seg[child].s_max = size;
        }
        seg[parent].s_min = std::max({size, seg[left].s_min, seg[right].s_min});
        seg[0].s_min = std::max(seg[0].s_min, seg[parent].s_min);
    }
    for (index_t i = 1; i < seg.size(); ++i) {
        if (seg[i].parent == 0) seg[i].s_max = seg[0].s_min;
    }
    return tree;
}

std::vector<index_t> leaves_at(const LeafTree& tree, double min_cluster_size) {
    std::vector<index_t> alive;
    for (index_t i = 1; i < tree.size(); ++i) {
        const Segment& s = tree.segments[i];
        if (s.s_min < min_cluster_size && min_cluster_size <= s.s_max) alive.push_back(i);
    }
    return alive;
}

}  // namespace plscan
