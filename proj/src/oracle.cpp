#include "plscan/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace plscan::oracle {

namespace {

// Plain union-find, kept separate from the library's.
struct Components {
    std::vector<index_t> parent;

    explicit Components(index_t n) : parent(n) { std::iota(parent.begin(), parent.end(), index_t{0}); }
    index_t root(index_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool join(index_t a, index_t b) {
        a = root(a);
        b = root(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

std::vector<double> unit_row(const PointSet& points, index_t i) {
    const auto p = points.point(i);
    std::vector<double> row(p.begin(), p.end());
    if (points.metric() == Metric::cosine) {
        double norm = 0.0;
        for (double x : row) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : row) x /= norm;
    }
    return row;
}

// The linkage tree seen top-down.
class Hierarchy {
  public:
    Hierarchy(const LinkageTree& linkage, const std::vector<double>& weights)
        : n_(linkage.num_points), linkage_(linkage), weight_(weights) {
        weight_.resize(linkage.node_count());
        std::vector<char> has_parent(linkage.node_count(), 0);
        for (index_t i = 0; i < linkage.rows.size(); ++i) {
            const auto& row = linkage.rows[i];
            weight_[n_ + i] = weight_[row.left] + weight_[row.right];
            has_parent[row.left] = has_parent[row.right] = 1;
        }
        for (index_t node = 0; node < linkage.node_count(); ++node) {
            if (!has_parent[node]) roots_.push_back(node);
        }
        top_distance_ = 0.0;
        for (const auto& row : linkage.rows) top_distance_ = std::max(top_distance_, row.distance);
    }

    index_t n() const { return n_; }
    bool is_point(index_t node) const { return node < n_; }
    double weight(index_t node) const { return weight_[node]; }
    const LinkageRow& row(index_t node) const { return linkage_.rows[node - n_]; }
    const std::vector<index_t>& roots() const { return roots_; }
    double top_distance() const { return top_distance_; }
    double total_weight() const {
        double total = 0.0;
        for (index_t p = 0; p < n_; ++p) total += weight_[p];
        return total;
    }

    std::vector<index_t> points_under(index_t node) const {
        std::vector<index_t> out;
        std::vector<index_t> stack{node};
        while (!stack.empty()) {
            const index_t x = stack.back();
            stack.pop_back();
            if (is_point(x)) {
                out.push_back(x);
            } else {
                stack.push_back(row(x).left);
                stack.push_back(row(x).right);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    index_t n_;
    const LinkageTree& linkage_;
    std::vector<double> weight_;
    std::vector<index_t> roots_;
    double top_distance_;
};

struct Cluster {
    index_t node = 0;
    index_t component = 0;
    bool component_root = false;
    bool has_children = false;
};

struct Condensation {
    std::vector<CondensedRow> rows;
    std::vector<Cluster> clusters;  // label n + i; entry 0 is the phantom root
};

Condensation condense_bfs(const Hierarchy& h, double m) {
    const index_t n = h.n();
    Condensation out;
    out.clusters.push_back(Cluster{});
    auto new_cluster = [&](index_t node, index_t component, bool component_root) {
        out.clusters.push_back(Cluster{node, component, component_root, false});
        return n + out.clusters.size() - 1;
    };

    for (index_t c = 0; c < h.roots().size(); ++c) {
        const index_t root = h.roots()[c];
        if (h.is_point(root)) {
            out.rows.push_back(CondensedRow{n, root, h.top_distance(), h.weight(root)});
            continue;
        }
        std::deque<std::pair<index_t, index_t>> queue{{root, n}};
        while (!queue.empty()) {
            const auto [node, label] = queue.front();
            queue.pop_front();
            const LinkageRow& r = h.row(node);
            const bool big_left = h.weight(r.left) >= m;
            const bool big_right = h.weight(r.right) >= m;
            if (big_left && big_right) {
                index_t parent = label;
                if (parent == n) parent = new_cluster(node, c, true);
                out.clusters[parent - n].has_children = true;
                for (index_t side : {r.left, r.right}) {
                    const index_t child = new_cluster(side, c, false);
                    out.rows.push_back(CondensedRow{parent, child, r.distance, h.weight(side)});
                    queue.emplace_back(side, child);
                }
                continue;
            }
            for (index_t side : {r.left, r.right}) {
                if (h.weight(side) >= m) {
                    queue.emplace_back(side, label);
                } else {
                    for (index_t p : h.points_under(side)) {
                        out.rows.push_back(CondensedRow{label, p, r.distance, h.weight(p)});
                    }
                }
            }
        }
    }
    return out;
}

struct LeafSets {
    double threshold = 0.0;
    std::vector<std::vector<index_t>> leaves;
};

// Leaf point sets at m_c, m_c + 1, ... until nothing is left.
std::vector<LeafSets> leaf_sets_by_threshold(const Hierarchy& h, double min_cluster_size) {
    const Condensation base = condense_bfs(h, min_cluster_size);
    std::vector<std::vector<index_t>> component_points(h.roots().size());
    for (const auto& cluster : base.clusters) {
        if (cluster.component_root) component_points[cluster.component] = h.points_under(cluster.node);
    }

    std::vector<LeafSets> out;
    const double last = std::floor(h.total_weight()) + 1.0;
    for (double m = min_cluster_size; m <= last; m += 1.0) {
        const Condensation at = condense_bfs(h, m);
        LeafSets sets{m, {}};
        std::vector<char> splits(h.roots().size(), 0);
        for (index_t i = 1; i < at.clusters.size(); ++i) {
            const Cluster& cluster = at.clusters[i];
            splits[cluster.component] = 1;
            if (!cluster.component_root && !cluster.has_children) sets.leaves.push_back(h.points_under(cluster.node));
        }
        if (at.clusters.size() > 1) {
            for (index_t c = 0; c < component_points.size(); ++c) {
                if (!splits[c] && !component_points[c].empty()) sets.leaves.push_back(component_points[c]);
            }
        }
        std::sort(sets.leaves.begin(), sets.leaves.end());
        out.push_back(std::move(sets));
    }
    return out;
}

}  // namespace

double distance(const PointSet& points, index_t i, index_t j) {
    if (points.metric() == Metric::cosine) {
        const auto a = unit_row(points, i);
        const auto b = unit_row(points, j);
        double dot = 0.0;
        for (index_t d = 0; d < a.size(); ++d) dot += a[d] * b[d];
        return std::max(0.0, 1.0 - dot);
    }
    const auto a = points.point(i);
    const auto b = points.point(j);
    double sq = 0.0;
    for (index_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        sq += diff * diff;
    }
    return std::sqrt(sq);
}

std::vector<Neighbor> knn(const PointSet& points, index_t query, index_t k) {
    const index_t n = points.size();
    if (k == 0 || k >= n) throw InputError("k must lie in [1, n - 1]");
    std::vector<Neighbor> all;
    for (index_t j = 0; j < n; ++j) {
        if (j != query) all.push_back(Neighbor{j, distance(points, query, j)});
    }
    std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
    });
    all.resize(k);
    return all;
}

std::vector<double> core_distances(const PointSet& points, index_t k) {
    std::vector<double> core(points.size());
    for (index_t i = 0; i < points.size(); ++i) core[i] = knn(points, i, k).back().distance;
    return core;
}

SpanningForest prim_mst(const PointSet& points, const std::vector<double>& core) {
    const index_t n = points.size();
    SpanningForest forest;
    forest.num_points = n;
    std::vector<char> done(n, 0);
    std::vector<double> best(n, kInfinity);
    std::vector<index_t> from(n, 0);
    index_t current = 0;
    done[0] = 1;
    for (index_t step = 1; step < n; ++step) {
        for (index_t j = 0; j < n; ++j) {
            if (done[j]) continue;
            const double w = std::max({distance(points, current, j), core[current], core[j]});
            if (w < best[j]) {
                best[j] = w;
                from[j] = current;
            }
        }
        index_t next = n;
        for (index_t j = 0; j < n; ++j) {
            if (!done[j] && (next == n || best[j] < best[next])) next = j;
        }
        done[next] = 1;
        forest.edges.push_back(Edge{std::min(next, from[next]), std::max(next, from[next]), best[next]});
        current = next;
    }
    return forest;
}

double total_weight(const SpanningForest& forest) {
    double total = 0.0;
    for (double w : weight_multiset(forest)) total += w;
    return total;
}

std::vector<double> weight_multiset(const SpanningForest& forest) {
    std::vector<double> weights;
    for (const auto& e : forest.edges) weights.push_back(e.weight);
    std::sort(weights.begin(), weights.end());
    return weights;
}

CondensedTree bfs_condense(const LinkageTree& linkage, const std::vector<double>& weights, double min_cluster_size) {
    const Hierarchy h(linkage, weights);
    CondensedTree tree;
    tree.num_points = linkage.num_points;
    tree.min_cluster_size = min_cluster_size;
    tree.rows = condense_bfs(h, min_cluster_size).rows;
    return tree;
}

std::vector<CanonicalRow> canonical_rows(const CondensedTree& tree) {
    const index_t n = tree.num_points;
    // Points below every cluster id, gathered bottom-up.
    std::map<index_t, std::vector<index_t>> below;
    std::map<index_t, std::vector<index_t>> children;
    for (const auto& row : tree.rows) {
        if (row.child < n) {
            below[row.parent].push_back(row.child);
        } else {
            children[row.parent].push_back(row.child);
        }
    }
    std::map<index_t, std::vector<index_t>> subtree;
    auto collect = [&](index_t cluster) {
        std::vector<index_t> out;
        std::vector<index_t> stack{cluster};
        while (!stack.empty()) {
            const index_t c = stack.back();
            stack.pop_back();
            out.insert(out.end(), below[c].begin(), below[c].end());
            stack.insert(stack.end(), children[c].begin(), children[c].end());
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto key = [&](index_t cluster) -> const std::vector<index_t>& {
        auto it = subtree.find(cluster);
        if (it == subtree.end()) it = subtree.emplace(cluster, cluster == n ? std::vector<index_t>{} : collect(cluster)).first;
        return it->second;
    };

    std::vector<CanonicalRow> rows;
    for (const auto& row : tree.rows) {
        CanonicalRow c;
        c.parent = key(row.parent);
        c.child_is_point = row.child < n;
        c.child = c.child_is_point ? std::vector<index_t>{row.child} : key(row.child);
        c.distance = row.distance;
        c.size = row.size;
        rows.push_back(std::move(c));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

std::vector<LeafInterval> leaf_lifetimes_by_sweep(const LinkageTree& linkage, const std::vector<double>& weights,
                                                  double min_cluster_size) {
    const Hierarchy h(linkage, weights);
    std::vector<LeafInterval> out;
    std::map<std::vector<index_t>, double> open;  // leaf -> first threshold seen
    auto close = [&](const std::vector<index_t>& points, double first, double last) {
        const double birth = std::max(first - 1.0, min_cluster_size);
        if (birth < last) out.push_back(LeafInterval{birth, last, points});
    };
    for (const auto& sets : leaf_sets_by_threshold(h, min_cluster_size)) {
        const std::set<std::vector<index_t>> now(sets.leaves.begin(), sets.leaves.end());
        for (auto it = open.begin(); it != open.end();) {
            if (now.count(it->first)) {
                ++it;
            } else {
                close(it->first, it->second, sets.threshold - 1.0);
                it = open.erase(it);
            }
        }
        for (const auto& leaf : now) open.emplace(leaf, sets.threshold);
    }
    if (!open.empty()) throw std::logic_error("leaves remain after the largest threshold");
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<LeafInterval> leaf_tree_intervals(const LeafTree& tree, const CondensedTree& condensed) {
    const index_t n = condensed.num_points;
    std::vector<std::vector<index_t>> direct(tree.size());
    for (const auto& row : condensed.rows) {
        if (row.child < n) direct[row.parent - n].push_back(row.child);
    }
    std::vector<std::vector<index_t>> children(tree.size());
    for (index_t s = 1; s < tree.size(); ++s) children[tree.segments[s].parent].push_back(s);

    std::vector<LeafInterval> out;
    for (index_t s = 1; s < tree.size(); ++s) {
        const Segment& seg = tree.segments[s];
        if (!(seg.s_min < seg.s_max)) continue;
        LeafInterval interval{seg.s_min, seg.s_max, {}};
        std::vector<index_t> stack{s};
        while (!stack.empty()) {
            const index_t c = stack.back();
            stack.pop_back();
            interval.points.insert(interval.points.end(), direct[c].begin(), direct[c].end());
            stack.insert(stack.end(), children[c].begin(), children[c].end());
        }
        std::sort(interval.points.begin(), interval.points.end());
        out.push_back(std::move(interval));
    }
    std::sort(out.begin(), out.end());
    return out;
}

PruningMetricSpace build_pruning_space(const LinkageTree& linkage, const std::vector<double>& weights,
                                       double min_cluster_size) {
    const Hierarchy h(linkage, weights);
    const index_t n = linkage.num_points;
    std::vector<double> together(n * n, kInfinity);
    std::vector<double> noise(n, kInfinity);
    for (index_t i = 0; i < n; ++i) together[i * n + i] = 0.0;

    for (const auto& sets : leaf_sets_by_threshold(h, min_cluster_size)) {
        std::vector<char> in_leaf(n, 0);
        for (const auto& leaf : sets.leaves) {
            for (index_t a : leaf) {
                in_leaf[a] = 1;
                for (index_t b : leaf) {
                    if (together[a * n + b] == kInfinity) together[a * n + b] = sets.threshold;
                }
            }
        }
        for (index_t i = 0; i < n; ++i) {
            if (!in_leaf[i] && noise[i] == kInfinity) noise[i] = sets.threshold;
        }
    }

    PruningMetricSpace space;
    space.num_points = n;
    space.min_cluster_size = min_cluster_size;
    const index_t size = 2 * n;
    space.dist.assign(size * size, kInfinity);
    auto set = [&](index_t a, index_t b, double value) { space.dist[a * size + b] = space.dist[b * size + a] = value; };
    for (index_t i = 0; i < n; ++i) {
        for (index_t j = 0; j < n; ++j) {
            const double d = together[i * n + j];
            set(i, j, d);
            if (i == j) {
                set(i, n + i, noise[i]);
                set(n + i, n + i, 0.0);
            } else {
                set(i, n + j, std::max(d, noise[j]));
                set(n + i, n + j, std::max({noise[i], d, noise[j]}));
            }
        }
    }
    return space;
}

std::string ultrametric_violation(const PruningMetricSpace& space) {
    const index_t size = 2 * space.num_points;
    for (index_t a = 0; a < size; ++a) {
        for (index_t b = 0; b < size; ++b) {
            for (index_t c = 0; c < size; ++c) {
                if (space.at(a, c) > std::max(space.at(a, b), space.at(b, c))) {
                    return "d(" + std::to_string(a) + "," + std::to_string(c) + ") exceeds max(d(" + std::to_string(a) +
                           "," + std::to_string(b) + "), d(" + std::to_string(b) + "," + std::to_string(c) + "))";
                }
            }
        }
    }
    return {};
}

std::vector<Bar> pruning_barcode(const PruningMetricSpace& space) {
    const std::string violation = ultrametric_violation(space);
    if (!violation.empty()) throw std::logic_error("pruning space is not ultrametric: " + violation);

    const index_t n = space.num_points;
    const index_t size = 2 * n;
    struct Link {
        double level;
        index_t a, b;
    };
    std::vector<Link> links;
    std::vector<double> levels{space.min_cluster_size};
    for (index_t a = 0; a < size; ++a) {
        for (index_t b = a + 1; b < size; ++b) {
            if (std::isfinite(space.at(a, b))) {
                links.push_back(Link{space.at(a, b), a, b});
                levels.push_back(space.at(a, b));
            }
        }
    }
    std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) { return x.level < y.level; });
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    struct Entity {
        double born;
        index_t member;  // any element of its component
    };
    std::vector<Entity> alive;
    std::vector<Bar> bars;
    auto finish = [&](const Entity& e, double level) {
        const double birth = std::max(e.born - 1.0, space.min_cluster_size);
        if (birth < level - 1.0) bars.push_back(Bar{birth, level - 1.0});
    };

    Components cc(size);
    index_t next_link = 0;
    for (double level : levels) {
        while (next_link < links.size() && links[next_link].level <= level) {
            cc.join(links[next_link].a, links[next_link].b);
            ++next_link;
        }
        std::map<index_t, index_t> leaf_member;  // component root -> a point in it
        for (index_t i = 0; i < n; ++i) {
            const index_t r = cc.root(i);
            if (cc.root(n + i) != r && !leaf_member.count(r)) leaf_member[r] = i;
        }
        std::map<index_t, std::vector<Entity>> carried;
        for (const Entity& e : alive) {
            const index_t r = cc.root(e.member);
            if (leaf_member.count(r)) {
                carried[r].push_back(e);
            } else {
                finish(e, level);
            }
        }
        std::vector<Entity> next;
        for (const auto& [root, member] : leaf_member) {
            const auto it = carried.find(root);
            if (it != carried.end() && it->second.size() == 1) {
                next.push_back(it->second.front());
                continue;
            }
            if (it != carried.end()) {
                for (const Entity& e : it->second) finish(e, level);
            }
            next.push_back(Entity{level, member});
        }
        alive = std::move(next);
    }
    if (!alive.empty()) throw std::logic_error("leaf components survive the largest pruning level");
    std::sort(bars.begin(), bars.end());
    return bars;
}

std::vector<Bar> leaf_tree_bars(const LeafTree& tree) {
    std::vector<Bar> bars;
    for (index_t s = 1; s < tree.size(); ++s) {
        const Segment& seg = tree.segments[s];
        if (seg.s_min < seg.s_max) bars.push_back(Bar{seg.s_min, seg.s_max});
    }
    std::sort(bars.begin(), bars.end());
    return bars;
}

std::vector<double> size_trace_by_sweep(const std::vector<LeafInterval>& intervals, double min_cluster_size,
                                        index_t num_points) {
    std::vector<double> totals;
    for (double m = min_cluster_size + 1.0; m <= static_cast<double>(num_points); m += 1.0) {
        double total = 0.0;
        for (const auto& leaf : intervals) {
            if (leaf.birth < m && m <= leaf.death) total += leaf.death - leaf.birth;
        }
        totals.push_back(total);
    }
    return totals;
}

std::vector<label_t> best_cut_labels(const std::vector<LeafInterval>& intervals, double min_cluster_size,
                                     index_t num_points, double* best_threshold) {
    std::vector<label_t> labels(num_points, kNoise);
    const auto totals = size_trace_by_sweep(intervals, min_cluster_size, num_points);
    if (totals.empty() || intervals.empty()) return labels;
    const auto best = std::max_element(totals.begin(), totals.end());
    const double m = min_cluster_size + 1.0 + static_cast<double>(best - totals.begin());
    if (best_threshold != nullptr) *best_threshold = m;

    std::vector<const LeafInterval*> alive;
    for (const auto& leaf : intervals) {
        if (leaf.birth < m && m <= leaf.death) alive.push_back(&leaf);
    }
    std::sort(alive.begin(), alive.end(), [](const LeafInterval* a, const LeafInterval* b) {
        return a->points.front() < b->points.front();
    });
    for (index_t c = 0; c < alive.size(); ++c) {
        for (index_t p : alive[c]->points) {
            if (labels[p] != kNoise) throw std::logic_error("leaf clusters overlap");
            labels[p] = static_cast<label_t>(c);
        }
    }
    return labels;
}

std::vector<label_t> canonical_labels(const std::vector<label_t>& labels) {
    std::map<label_t, label_t> renamed;
    std::vector<label_t> out(labels.size(), kNoise);
    for (index_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kNoise) continue;
        const auto [it, inserted] = renamed.emplace(labels[i], static_cast<label_t>(renamed.size()));
        out[i] = it->second;
    }
    return out;
}

}  // namespace plscan::oracle
