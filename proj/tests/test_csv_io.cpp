#include <doctest.h>

#include <sstream>

#include "plscan/csv_io.hpp"
#include "support/fixtures.hpp"

using namespace plscan;

namespace {

std::string error_of(auto&& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("points with and without a header") {
    std::istringstream plain("1,2\n3,4\n\n5,6\n");
    const auto a = io::read_points(plain);
    CHECK(a.rows == 3);
    CHECK(a.dim == 2);
    CHECK(a.coords == std::vector<double>{1, 2, 3, 4, 5, 6});

    std::istringstream headed("x , y\n1.5, -2e1\n");
    const auto b = io::read_points(headed);
    CHECK(b.rows == 1);
    CHECK(b.coords == std::vector<double>{1.5, -20});
}

TEST_CASE("point errors name the line") {
    CHECK(error_of([] {
              std::istringstream in("x,y\n1,2\n3\n");
              io::read_points(in);
          }).find("line 3:") == 0);
    CHECK(error_of([] {
              std::istringstream in("1,2\n3,abc\n");
              io::read_points(in);
          }).find("line 2: column 2") == 0);
    CHECK(error_of([] {
              std::istringstream in("x,y\n");
              io::read_points(in);
          }) != "");
}

TEST_CASE("input kind detection") {
    std::istringstream forest("\nu,v,weight\n0,1,2\n");
    CHECK(io::detect_kind(forest) == io::InputKind::forest);
    std::istringstream points("a,b,c\n1,2,3\n");
    CHECK(io::detect_kind(points) == io::InputKind::points);
}

TEST_CASE("forest reading") {
    std::istringstream in("u,v,weight\n2,0,1.5\n1,2,0.5\n");
    const auto forest = io::read_forest(in);
    CHECK(forest.num_points == 3);
    CHECK(forest.edges.size() == 2);
    std::istringstream wider("u,v,weight\n0,1,1\n");
    CHECK(io::read_forest(wider, 5).num_points == 5);

    CHECK(error_of([] {
              std::istringstream bad("0,1,1\n");
              io::read_forest(bad);
          }).find("line 1:") == 0);
    CHECK(error_of([] {
              std::istringstream bad("u,v,weight\n0,1,1\n-1,2,3\n");
              io::read_forest(bad);
          }).find("line 3: u") == 0);
    CHECK(error_of([] {
              std::istringstream bad("u,v,weight\n0,1\n");
              io::read_forest(bad);
          }).find("line 2:") == 0);
}

TEST_CASE("weights") {
    std::istringstream in("weight\n1\n2.5\n");
    CHECK(io::read_weights(in) == std::vector<double>{1, 2.5});
    CHECK(error_of([] {
              std::istringstream bad("1\nx\n");
              io::read_weights(bad);
          }).find("line 2:") == 0);
}

TEST_CASE("number formatting") {
    CHECK(io::format_real(0.5) == "0.5");
    CHECK(io::format_real(150.0) == "150");
    CHECK(io::format_real(1.0 / 3.0) == "0.333333333");
}

TEST_CASE("writers") {
    Clustering c;
    c.labels = {0, -1};
    c.probabilities = {1.0, 0.0};
    std::ostringstream labels;
    io::write_labels(labels, c);
    CHECK(labels.str() == "point,label,probability\n0,0,1\n1,-1,0\n");

    PersistenceTrace t;
    t.min_size = {5, 19};
    t.total = {48, 26};
    std::ostringstream trace;
    io::write_trace(trace, t);
    CHECK(trace.str() == "min_size,total_persistence\n5,48\n19,26\n");

    std::ostringstream layers;
    io::write_layers(layers, {{5, 48}});
    CHECK(layers.str() == "rank,cut,total_persistence\n0,5,48\n");
}

TEST_CASE("leaf tree round trip") {
    const LeafTree tree = testing_data::two_merge_leaf_tree();
    REQUIRE(tree.size() == 6);
    std::ostringstream out;
    io::write_leaf_tree(out, tree);
    std::istringstream back(out.str());
    const LeafTree again = io::read_leaf_tree(back);
    REQUIRE(again.size() == tree.size());
    for (index_t i = 0; i < tree.size(); ++i) {
        CHECK(again.segments[i].parent == tree.segments[i].parent);
        CHECK(again.segments[i].d_max == tree.segments[i].d_max);
        CHECK(again.segments[i].s_min == tree.segments[i].s_min);
    }
    CHECK(error_of([] {
              std::istringstream bad("segment,parent,d_min,d_max,s_min,s_max\n1,0,0,1,2,3\n");
              io::read_leaf_tree(bad);
          }).find("line 2:") == 0);
}
