#pragma once

#include <numeric>
#include <vector>

#include "plscan/types.hpp"

namespace plscan {

/// Disjoint sets with path halving and union by size.
class DisjointSet {
  public:
    explicit DisjointSet(index_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), index_t{0}); }

    index_t find(index_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns false when a and b were already joined.
    bool unite(index_t a, index_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

  private:
    std::vector<index_t> parent_;
    std::vector<index_t> size_;
};

}  // namespace plscan
