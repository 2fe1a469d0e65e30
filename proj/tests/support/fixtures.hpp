#pragma once

#include <fstream>
#include <string>

#include "plscan/csv_io.hpp"

namespace testing_data {

inline std::string fixture_path(const std::string& name) { return std::string(PLSCAN_FIXTURES) + "/" + name; }

/// The 150-point forest with merges at 8.14 and 1.74 (initial m_c = 5).
inline plscan::SpanningForest two_merge_forest() {
    std::ifstream in(fixture_path("two_merge_forest.csv"));
    return plscan::io::read_forest(in);
}

inline plscan::LeafTree two_merge_leaf_tree() {
    std::ifstream in(fixture_path("two_merge_leaf_tree.csv"));
    return plscan::io::read_leaf_tree(in);
}

}  // namespace testing_data
