#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "hais/errors.hpp"
#include "hais/geometry.hpp"

namespace hais {

/// Disjoint-set forest with path halving and union by rank.
/// Mutation is single-writer; concurrent find() calls without interleaved
/// unite() are safe only on a quiesced structure.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), PointIndex{0});
  }

  std::size_t size() const { return parent_.size(); }

  PointIndex find(PointIndex a) {
    check(a);
    while (parent_[static_cast<std::size_t>(a)] != a) {
      PointIndex grand = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(a)])];
      parent_[static_cast<std::size_t>(a)] = grand;
      a = grand;
    }
    return a;
  }

  /// Returns true when the two elements were in different sets.
  bool unite(PointIndex a, PointIndex b) {
    PointIndex ra = find(a);
    PointIndex rb = find(b);
    if (ra == rb) {
      return false;
    }
    if (rank_[static_cast<std::size_t>(ra)] < rank_[static_cast<std::size_t>(rb)]) {
      std::swap(ra, rb);
    }
    parent_[static_cast<std::size_t>(rb)] = ra;
    if (rank_[static_cast<std::size_t>(ra)] == rank_[static_cast<std::size_t>(rb)]) {
      ++rank_[static_cast<std::size_t>(ra)];
    }
    return true;
  }

  bool same(PointIndex a, PointIndex b) { return find(a) == find(b); }

 private:
  void check(PointIndex a) const {
    if (a < 0 || static_cast<std::size_t>(a) >= parent_.size()) {
      throw IndexError("UnionFind: index " + std::to_string(a) + " out of range");
    }
  }

  std::vector<PointIndex> parent_;
  std::vector<std::uint8_t> rank_;
};

/// Labels [0, n) by connected component. The component id is the smallest
/// member index, so the labeling does not depend on edge order.
inline std::vector<PointIndex> connected_components(
    std::size_t n, std::span<const std::pair<PointIndex, PointIndex>> edges) {
  UnionFind uf(n);
  for (const auto& [a, b] : edges) {
    uf.unite(a, b);
  }
  std::vector<PointIndex> labels(n, -1);
  // Ascending scan: the first index reaching a root is the component minimum.
  std::vector<PointIndex> root_label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    PointIndex root = uf.find(static_cast<PointIndex>(i));
    if (root_label[static_cast<std::size_t>(root)] < 0) {
      root_label[static_cast<std::size_t>(root)] = static_cast<PointIndex>(i);
    }
    labels[i] = root_label[static_cast<std::size_t>(root)];
  }
  return labels;
}

}  // namespace hais
