#include "plscan/condense.hpp"

#include <algorithm>
#include <string>

namespace plscan {

namespace {

struct NodeState {
    index_t label = 0;
    bool pruned = false;
    index_t slot = 0;       // next reserved row, pruned nodes only
    double distance = 0.0;  // distance at which the pruned branch fell off
};

}  // namespace

CondensedTree condense_tree(const LinkageTree& linkage, const std::vector<double>& sample_weights,
                            double min_cluster_size) {
    const index_t n = linkage.num_points;
    validate_sample_weights(sample_weights, n);
    const double max_weight = *std::max_element(sample_weights.begin(), sample_weights.end());
    if (!(min_cluster_size > max_weight)) {
        throw InputError("minimum cluster size " + std::to_string(min_cluster_size) +
                         " must exceed the largest sample weight " + std::to_string(max_weight));
    }

    const auto& links = linkage.rows;
    auto size_of = [&](index_t node) { return node < n ? sample_weights[node] : links[node - n].size; };
    auto count_of = [&](index_t node) { return node < n ? index_t{1} : links[node - n].count; };

    CondensedTree tree;
    tree.num_points = n;
    tree.min_cluster_size = min_cluster_size;
    tree.rows.resize(n);  // grows by two per accepted merge
    index_t next_row = 0;
    index_t next_label = n + 1;

    std::vector<char> has_parent(linkage.node_count(), 0);
    for (const auto& link : links) {
        has_parent[link.left] = 1;
        has_parent[link.right] = 1;
    }
    // Points outside every merge are singleton components: noise below the
    // phantom root, placed first at the largest distance in the tree.
    const double top_distance = links.empty() ? 0.0 : links.back().distance;
    for (index_t p = 0; p < n; ++p) {
        if (!has_parent[p]) tree.rows[next_row++] = CondensedRow{n, p, top_distance, sample_weights[p]};
    }

    std::vector<NodeState> state(links.size(), NodeState{n, false, 0, 0.0});

    auto ensure_rows = [&](index_t needed) {
        if (tree.rows.size() < needed) tree.rows.resize(needed);
    };

    for (index_t i = links.size(); i-- > 0;) {
        const LinkageRow& link = links[i];
        const NodeState current = state[i];
        const index_t children[2] = {link.left, link.right};

        if (current.pruned) {
            index_t slot = current.slot;
            for (index_t child : children) {
                if (child < n) {
                    tree.rows[slot] = CondensedRow{current.label, child, current.distance, sample_weights[child]};
                    ++slot;
                } else {
                    state[child - n] = NodeState{current.label, true, slot, current.distance};
                    slot += count_of(child);
                }
            }
            continue;
        }

        const bool large[2] = {size_of(link.left) >= min_cluster_size, size_of(link.right) >= min_cluster_size};
        for (int side = 0; side < 2; ++side) {
            if (large[side]) continue;
            const index_t child = children[side];
            if (child < n) {
                tree.rows[next_row++] = CondensedRow{current.label, child, link.distance, sample_weights[child]};
            } else {
                state[child - n] = NodeState{current.label, true, next_row, link.distance};
                next_row += count_of(child);
            }
        }

        if (large[0] && large[1]) {
            index_t parent = current.label;
            if (parent == n) parent = next_label++;  // first split of a component
            const index_t left_label = next_label++;
            const index_t right_label = next_label++;
            ensure_rows(n + 2 * (tree.cluster_pairs.size() + 1));
            tree.cluster_pairs.push_back(next_row);
            tree.rows[next_row++] = CondensedRow{parent, left_label, link.distance, size_of(link.left)};
            tree.rows[next_row++] = CondensedRow{parent, right_label, link.distance, size_of(link.right)};
            state[link.left - n] = NodeState{left_label, false, 0, 0.0};
            state[link.right - n] = NodeState{right_label, false, 0, 0.0};
        } else {
            for (int side = 0; side < 2; ++side) {
                if (large[side]) state[children[side] - n] = NodeState{current.label, false, 0, 0.0};
            }
        }
    }
    tree.rows.resize(next_row);
    return tree;
}

}  // namespace plscan
