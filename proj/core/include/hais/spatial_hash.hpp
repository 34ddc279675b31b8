#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "hais/geometry.hpp"

namespace hais {

/// Uniform grid over 3D space for exact radius queries. A point p lives in
/// cell floor(p / cell_size), componentwise. The structure is immutable after
/// construction; concurrent queries on a shared grid are safe.
class SpatialHashGrid {
 public:
  /// Indexes every point exactly once. Throws ConfigError when
  /// cell_size <= 0 and InputError on non-finite coordinates.
  SpatialHashGrid(std::span<const Vec3> positions, double cell_size);

  double cell_size() const { return cell_size_; }
  std::size_t point_count() const { return positions_.size(); }
  const std::vector<Vec3>& positions() const { return positions_; }

  std::array<std::int32_t, 3> cell_of(const Vec3& p) const;

  /// Point indices stored in the given cell, ascending; nullptr when the cell
  /// is empty.
  const std::vector<PointIndex>* cell_points(const std::array<std::int32_t, 3>& cell) const;

  /// Exactly the indices j != query with ||p_j - p_query|| < radius (strict),
  /// in ascending index order. Scans ceil(radius / cell_size) cells per axis
  /// around the query's cell. Throws IndexError on a bad query index.
  std::vector<PointIndex> neighbors_within(PointIndex query, double radius) const;

  /// Buffer-reusing variant; `out` is cleared first.
  void neighbors_within(PointIndex query, double radius, std::vector<PointIndex>& out) const;

  /// Enumeration form without the ordering guarantee; the hot path for
  /// clustering, where callers only accumulate. Calls fn(j) for every
  /// neighbor j != query strictly inside the radius.
  template <typename F>
  void for_each_neighbor_within(PointIndex query, double radius, F&& fn) const {
    if (query < 0 || static_cast<std::size_t>(query) >= positions_.size()) {
      throw IndexError("neighbors_within: query index " + std::to_string(query) +
                       " out of range");
    }
    if (!(radius > 0.0)) {
      return;
    }
    const Vec3& q = positions_[static_cast<std::size_t>(query)];
    const double r2 = radius * radius;
    const std::int32_t reach = static_cast<std::int32_t>(std::ceil(radius / cell_size_));
    const auto center = cell_of(q);
    for (std::int32_t dx = -reach; dx <= reach; ++dx) {
      for (std::int32_t dy = -reach; dy <= reach; ++dy) {
        for (std::int32_t dz = -reach; dz <= reach; ++dz) {
          auto it = cells_.find(CellKey{center[0] + dx, center[1] + dy, center[2] + dz});
          if (it == cells_.end()) {
            continue;
          }
          for (PointIndex j : it->second) {
            if (j != query &&
                squared_distance(q, positions_[static_cast<std::size_t>(j)]) < r2) {
              fn(j);
            }
          }
        }
      }
    }
  }

 private:
  struct CellKey {
    std::int32_t x, y, z;
    bool operator==(const CellKey&) const = default;
  };
  struct CellKeyHash {
    std::size_t operator()(const CellKey& c) const noexcept;
  };

  double cell_size_;
  std::vector<Vec3> positions_;
  std::unordered_map<CellKey, std::vector<PointIndex>, CellKeyHash> cells_;
};

inline SpatialHashGrid build_spatial_hash(std::span<const Vec3> positions, double cell_size) {
  return SpatialHashGrid(positions, cell_size);
}

}  // namespace hais
