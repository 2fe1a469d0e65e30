#include <doctest.h>

#include <map>

#include "plscan/mst.hpp"
#include "plscan/select.hpp"
#include "support/datasets.hpp"
#include "support/fixtures.hpp"

using namespace plscan;

namespace {

struct Built {
    CondensedTree condensed;
    LeafTree tree;
    PersistenceTrace trace;
};

Built build(const SpanningForest& forest, double m_c, Measure measure = Measure::size) {
    const auto w = unit_weights(forest.num_points);
    Built b;
    b.condensed = condense_tree(single_linkage(forest, w), w, m_c);
    b.tree = build_leaf_tree(b.condensed);
    b.trace = persistence_trace(b.tree, b.condensed, measure);
    return b;
}

Built build(const PointSet& points, index_t k, double m_c, Measure measure = Measure::size) {
    const SpatialIndex index(points, TreeKind::kd);
    return build(build_mst(index, core_distances(index, k)), m_c, measure);
}

// Reference labelling: every selected segment claims all points in its
// subtree, found by walking parent links of the point rows.
std::vector<label_t> reference_labels(const Built& b, const std::vector<index_t>& selected) {
    const index_t n = b.condensed.num_points;
    std::map<index_t, label_t> label_of;
    for (index_t i = 0; i < selected.size(); ++i) label_of[selected[i]] = static_cast<label_t>(i);
    std::vector<label_t> labels(n, kNoise);
    for (const auto& row : b.condensed.rows) {
        if (row.child >= n) continue;
        for (index_t s = row.parent - n; s != 0; s = b.tree.segments[s].parent) {
            const auto it = label_of.find(s);
            if (it != label_of.end()) {
                REQUIRE(labels[row.child] == kNoise);
                labels[row.child] = it->second;
            }
        }
    }
    return labels;
}

void check_clustering(const Built& b, const Clustering& c) {
    const index_t n = b.condensed.num_points;
    REQUIRE(c.labels.size() == n);
    REQUIRE(c.probabilities.size() == n);
    CHECK(c.labels == reference_labels(b, c.selected_segments));
    std::vector<double> weight(c.num_clusters(), 0.0);
    for (index_t i = 0; i < n; ++i) {
        if (c.labels[i] == kNoise) {
            REQUIRE(c.probabilities[i] == 0.0);
        } else {
            REQUIRE(c.labels[i] < static_cast<label_t>(c.num_clusters()));
            REQUIRE(c.probabilities[i] >= 0.0);
            REQUIRE(c.probabilities[i] <= 1.0);
            weight[c.labels[i]] += 1.0;
        }
    }
    for (index_t l = 0; l < c.num_clusters(); ++l) {
        const Segment& seg = b.tree.segments[c.selected_segments[l]];
        REQUIRE(seg.s_min <= c.cut);
        REQUIRE(c.cut < seg.s_max);
        REQUIRE(weight[l] >= c.cut);
    }
    // Within a cluster, later joins never get a higher probability.
    std::map<label_t, std::vector<std::pair<double, double>>> by_label;
    for (const auto& row : b.condensed.rows) {
        if (row.child < n && c.labels[row.child] != kNoise) {
            by_label[c.labels[row.child]].emplace_back(row.distance, c.probabilities[row.child]);
        }
    }
    for (auto& [label, rows] : by_label) {
        std::sort(rows.begin(), rows.end());
        for (index_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].second <= rows[i - 1].second);
    }
}

}  // namespace

TEST_CASE("two-merge: the best cut selects segments 2, 4 and 5") {
    const auto b = build(testing_data::two_merge_forest(), 5.0);
    const auto c = select_clusters(b.trace, b.tree, b.condensed);
    CHECK(c.cut == 5.0);
    CHECK(c.selected_segments == std::vector<index_t>{2, 4, 5});
    for (index_t p = 0; p < 25; ++p) CHECK(c.labels[p] == 0);
    for (index_t p = 25; p < 44; ++p) CHECK(c.labels[p] == 1);
    for (index_t p = 44; p < 130; ++p) CHECK(c.labels[p] == 2);
    for (index_t p = 130; p < 150; ++p) CHECK(c.labels[p] == kNoise);  // segment 3's own points
    CHECK(c.probabilities[0] == 1.0);                                   // joined at d_min = 0.92
    CHECK(c.probabilities[24] == doctest::Approx((8.14 - 2.9) / (8.14 - 0.92)));
    check_clustering(b, c);

    const auto same = extract_layer(5.0, b.tree, b.condensed);
    CHECK(same.labels == c.labels);
    CHECK(same.probabilities == c.probabilities);

    const auto coarse = extract_layer(22.0, b.tree, b.condensed);
    CHECK(coarse.selected_segments == std::vector<index_t>{2, 3});
    for (index_t p = 25; p < 150; ++p) CHECK(coarse.labels[p] == 1);
    check_clustering(b, coarse);

    const auto top = extract_layer(30.0, b.tree, b.condensed);
    CHECK(top.num_clusters() == 0);
    for (label_t l : top.labels) CHECK(l == kNoise);
}

TEST_CASE("a point joining at d_max has probability 0, a zero-width segment gives 1") {
    // Two triples split at 1.0 and every point falls off at that same distance.
    // Equal weights merge in (u, v) order, so the bridge 4-5 comes last.
    const auto b = build(from_precomputed({{0, 1, 1.0}, {0, 4, 1.0}, {2, 3, 1.0}, {2, 5, 1.0}, {4, 5, 1.0}}, 6), 2.0);
    const auto c = select_clusters(b.trace, b.tree, b.condensed);
    REQUIRE(c.num_clusters() == 2);
    for (index_t p = 0; p < 6; ++p) CHECK(c.probabilities[p] == 1.0);

    // A trailing point that joins exactly at the split distance.
    const auto t = build(from_precomputed({{0, 1, 0.5}, {1, 2, 2.0}, {3, 4, 0.5}, {4, 5, 0.5}, {2, 3, 2.0}}, 6), 2.0);
    const auto ct = select_clusters(t.trace, t.tree, t.condensed);
    REQUIRE(ct.num_clusters() == 2);
    CHECK(ct.labels[2] != kNoise);
    CHECK(ct.probabilities[2] == 0.0);
    check_clustering(t, ct);
}

TEST_CASE("no leaves anywhere: all noise") {
    const auto b = build(from_precomputed({{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 3.0}}, 4), 2.0);
    const auto c = select_clusters(b.trace, b.tree, b.condensed);
    CHECK(c.selected_segments.empty());
    for (index_t p = 0; p < 4; ++p) {
        CHECK(c.labels[p] == kNoise);
        CHECK(c.probabilities[p] == 0.0);
    }
}

TEST_CASE("property: labelling, sizes and probabilities on blobs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CAPTURE(seed);
        const auto b = build(testing_data::blobs(100 + 20 * seed, 2, 3 + seed % 4, 40 + seed), 4, 4.0,
                             static_cast<Measure>(seed % 5));
        check_clustering(b, select_clusters(b.trace, b.tree, b.condensed));
        // Layer granularity only coarsens with the cut.
        auto layers = find_layers(b.trace, 10);
        std::sort(layers.begin(), layers.end(), [](const Layer& x, const Layer& y) { return x.cut < y.cut; });
        index_t previous = b.condensed.num_points;
        for (const auto& layer : layers) {
            const auto c = extract_layer(layer.cut, b.tree, b.condensed);
            check_clustering(b, c);
            CHECK(c.num_clusters() <= previous);
            previous = c.num_clusters();
        }
    }
}

TEST_CASE("multi-component forest: one global cut") {
    // Component A = two chains of 6 split at 4.0, component B = a single chain.
    std::vector<Edge> edges;
    for (index_t i = 0; i < 5; ++i) edges.push_back({i, i + 1, 0.5});
    for (index_t i = 6; i < 11; ++i) edges.push_back({i, i + 1, 0.5});
    edges.push_back({0, 6, 4.0});
    for (index_t i = 12; i < 19; ++i) edges.push_back({i, i + 1, 1.0});
    const auto b = build(from_precomputed(edges, 20), 2.0);
    const auto c = select_clusters(b.trace, b.tree, b.condensed);
    CHECK(c.num_clusters() == 2);
    for (index_t p = 12; p < 20; ++p) CHECK(c.labels[p] == kNoise);
    check_clustering(b, c);
}
