#include <doctest.h>
#include <omp.h>

#include "plscan/mst.hpp"
#include "plscan/pipeline.hpp"
#include "support/datasets.hpp"
#include "support/fixtures.hpp"

using namespace plscan;

namespace {

PointSet two_blobs() {
    verify::BlobSpec spec;
    spec.points = 100;
    spec.centers = 2;
    spec.seed = 12;
    spec.box = 30.0;
    auto b = verify::make_blobs(spec);
    return PointSet(std::move(b.coords), 2);
}

}  // namespace

TEST_CASE("two separated blobs of 50: two clusters") {
    const FitResult r = fit(two_blobs(), Options{});
    CHECK(r.clustering.num_clusters() == 2);
    const auto noise = std::count(r.labels().begin(), r.labels().end(), kNoise);
    CHECK(noise < 50);
    CHECK(r.core_distances.size() == 100);
    CHECK(r.forest.edges.size() == 99);
}

TEST_CASE("k must be smaller than n") {
    const PointSet three({0, 1, 3}, 1);
    Options options;
    CHECK_THROWS_AS(fit(three, options), InputError);
    options.k = 2;
    CHECK_NOTHROW(fit(three, options));
}

TEST_CASE("option validation") {
    const auto points = two_blobs();
    Options options;
    options.num_layers = 0;
    CHECK_THROWS_AS(fit(points, options), InputError);
    options = Options{};
    options.min_cluster_size = 1.5;
    CHECK_THROWS_AS(fit(points, options), InputError);
    options = Options{};
    options.k = 1;
    CHECK(resolve_min_cluster_size(options) == 2.0);
    options.k = 7;
    CHECK(resolve_min_cluster_size(options) == 7.0);
    CHECK_THROWS_AS(fit(points, Options{}, std::vector<double>(5, 1.0)), InputError);
    CHECK_THROWS_AS(fit(points, Options{}, std::vector<double>(100, 4.0)), InputError);  // m_c = 4 <= weight
}

TEST_CASE("results are identical across runs and worker counts") {
    const auto points = testing_data::blobs(4000, 2, 7, 3);
    Options options;
    options.measure = Measure::size_density;
    omp_set_num_threads(1);
    const FitResult a = fit(points, options);
    omp_set_num_threads(4);
    const FitResult b = fit(points, options);
    const FitResult c = fit(points, options);
    for (const FitResult* other : {&b, &c}) {
        CHECK(a.labels() == other->labels());
        CHECK(a.probabilities() == other->probabilities());
        CHECK(a.trace_total() == other->trace_total());
        CHECK(a.layer_cuts() == other->layer_cuts());
        CHECK(a.forest.edges == other->forest.edges);
    }
}

TEST_CASE("column accessors mirror the structures") {
    const FitResult r = fit(testing_data::blobs(300, 3, 4, 8), Options{});
    const auto cols = r.leaf_tree_columns();
    CHECK(cols.parent.size() == r.leaf_tree.size());
    CHECK(cols.s_max.size() == r.leaf_tree.size());
    CHECK(cols.s_max[0] == 300.0);
    CHECK(r.trace_min_size().size() == r.trace_total().size());
    CHECK(r.layer_cuts().size() == r.layers.size());
    CHECK(r.layer_clusterings.size() == r.layers.size());
    REQUIRE_FALSE(r.layers.empty());
    CHECK(r.layer_clusterings[0].cut == r.layers[0].cut);
}

TEST_CASE("forest input and components without leaves") {
    const FitResult two_merge = fit_forest(testing_data::two_merge_forest(), [] {
        Options o;
        o.min_cluster_size = 5.0;
        return o;
    }());
    CHECK(two_merge.clustering.selected_segments == std::vector<index_t>{2, 4, 5});
    CHECK(components_without_leaves(two_merge) == 0);

    std::vector<Edge> edges;
    for (index_t i = 0; i < 5; ++i) edges.push_back({i, i + 1, 0.5});
    for (index_t i = 6; i < 11; ++i) edges.push_back({i, i + 1, 0.5});
    edges.push_back({0, 6, 4.0});
    for (index_t i = 12; i < 19; ++i) edges.push_back({i, i + 1, 1.0});
    const FitResult r = fit_forest(from_precomputed(edges, 21), Options{});  // point 20 isolated
    CHECK(components_without_leaves(r) == 1);
    CHECK(r.labels()[20] == kNoise);
}

TEST_CASE("sample weights act like repeated points for the thresholds") {
    // Doubling every weight and the initial size halves nothing: the same
    // hierarchy, every threshold doubled.
    const auto points = testing_data::blobs(200, 2, 3, 19);
    Options options;
    options.min_cluster_size = 4.0;
    const FitResult unit = fit(points, options);
    options.min_cluster_size = 8.0;
    const FitResult twice = fit(points, options, std::vector<double>(200, 2.0));
    CHECK(unit.labels() == twice.labels());
    REQUIRE(unit.trace.min_size.size() == twice.trace.min_size.size());
    for (index_t i = 0; i < unit.trace.min_size.size(); ++i) {
        CHECK(2.0 * unit.trace.min_size[i] == twice.trace.min_size[i]);
        CHECK(2.0 * unit.trace.total[i] == twice.trace.total[i]);
    }
}
