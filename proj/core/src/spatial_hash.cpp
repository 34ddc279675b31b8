#include "hais/spatial_hash.hpp"

#include <algorithm>
#include <cmath>

#include "hais/errors.hpp"

namespace hais {

namespace {

std::int32_t cell_coord(double v, double cell_size) {
  return static_cast<std::int32_t>(std::floor(v / cell_size));
}

std::uint64_t mix64(std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  return v ^ (v >> 31);
}

}  // namespace

std::size_t SpatialHashGrid::CellKeyHash::operator()(const CellKey& c) const noexcept {
  std::uint64_t h = mix64(static_cast<std::uint32_t>(c.x));
  h = mix64(h ^ static_cast<std::uint32_t>(c.y));
  h = mix64(h ^ static_cast<std::uint32_t>(c.z));
  return static_cast<std::size_t>(h);
}

SpatialHashGrid::SpatialHashGrid(std::span<const Vec3> positions, double cell_size)
    : cell_size_(cell_size), positions_(positions.begin(), positions.end()) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw ConfigError("SpatialHashGrid: cell_size must be finite and > 0");
  }
  cells_.reserve(positions_.size());
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const Vec3& p = positions_[i];
    if (!p.is_finite()) {
      throw InputError("SpatialHashGrid: non-finite coordinate at point " + std::to_string(i));
    }
    CellKey key{cell_coord(p.x, cell_size_), cell_coord(p.y, cell_size_),
                cell_coord(p.z, cell_size_)};
    cells_[key].push_back(static_cast<PointIndex>(i));
  }
}

std::array<std::int32_t, 3> SpatialHashGrid::cell_of(const Vec3& p) const {
  return {cell_coord(p.x, cell_size_), cell_coord(p.y, cell_size_), cell_coord(p.z, cell_size_)};
}

const std::vector<PointIndex>* SpatialHashGrid::cell_points(
    const std::array<std::int32_t, 3>& cell) const {
  auto it = cells_.find(CellKey{cell[0], cell[1], cell[2]});
  return it == cells_.end() ? nullptr : &it->second;
}

std::vector<PointIndex> SpatialHashGrid::neighbors_within(PointIndex query, double radius) const {
  std::vector<PointIndex> out;
  neighbors_within(query, radius, out);
  return out;
}

void SpatialHashGrid::neighbors_within(PointIndex query, double radius,
                                       std::vector<PointIndex>& out) const {
  out.clear();
  for_each_neighbor_within(query, radius, [&out](PointIndex j) { out.push_back(j); });
  std::sort(out.begin(), out.end());
}

}  // namespace hais
