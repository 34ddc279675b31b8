#include "hais/clustering.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "hais/errors.hpp"
#include "hais/parallel.hpp"
#include "hais/spatial_hash.hpp"
#include "hais/union_find.hpp"

namespace hais {

void PerPointPrediction::validate() const {
  if (semantic.size() != shift.size()) {
    throw InputError("PerPointPrediction: semantic/shift length mismatch");
  }
  for (std::size_t i = 0; i < shift.size(); ++i) {
    if (!shift[i].is_finite()) {
      throw InputError("PerPointPrediction: non-finite shift at point " + std::to_string(i));
    }
  }
}

void validate_disjoint(const InstanceSet& set, const char* context) {
  std::size_t total = 0;
  for (const Cluster& c : set.clusters) {
    total += c.size();
  }
  std::vector<PointIndex> all;
  all.reserve(total);
  for (const Cluster& c : set.clusters) {
    all.insert(all.end(), c.point_indices.begin(), c.point_indices.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw InvariantViolation(std::string(context) + ": clusters are not pairwise disjoint");
  }
}

void recompute_centers(InstanceSet& set, std::span<const Vec3> coords) {
  for (Cluster& c : set.clusters) {
    c.center = centroid(coords, c.point_indices);
  }
}

std::vector<Vec3> apply_shift(std::span<const Vec3> positions, std::span<const Vec3> shifts) {
  if (positions.size() != shifts.size()) {
    throw InputError("apply_shift: positions/shifts length mismatch");
  }
  std::vector<Vec3> shifted(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!positions[i].is_finite() || !shifts[i].is_finite()) {
      throw InputError("apply_shift: non-finite value at point " + std::to_string(i));
    }
    shifted[i] = positions[i] + shifts[i];
  }
  return shifted;
}

namespace {

std::vector<PointIndex> foreground_indices(std::span<const ClassId> semantic,
                                           const std::unordered_set<ClassId>& background_classes) {
  std::vector<PointIndex> fg;
  fg.reserve(semantic.size());
  for (std::size_t i = 0; i < semantic.size(); ++i) {
    if (!background_classes.contains(semantic[i])) {
      fg.push_back(static_cast<PointIndex>(i));
    }
  }
  return fg;
}

/// Assembles clusters from a component labeling over the compact foreground
/// index space. Output ordered by canonical id (ascending smallest member).
InstanceSet assemble_clusters(std::span<const PointIndex> fg,
                              std::span<const PointIndex> component,
                              std::span<const ClassId> semantic, std::span<const Vec3> coords) {
  // component ids are canonical (smallest compact member), so grouping by id
  // in a sorted map yields clusters ordered by canonical original index.
  std::map<PointIndex, std::vector<PointIndex>> groups;
  for (std::size_t k = 0; k < fg.size(); ++k) {
    groups[component[k]].push_back(fg[k]);
  }
  InstanceSet out;
  out.clusters.reserve(groups.size());
  for (auto& [id, members] : groups) {
    Cluster c;
    c.point_indices = std::move(members);  // ascending by construction
    c.semantic = semantic[static_cast<std::size_t>(c.point_indices.front())];
    c.center = centroid(coords, c.point_indices);
    out.clusters.push_back(std::move(c));
  }
  return out;
}

}  // namespace

InstanceSet point_aggregate(std::span<const Vec3> coords, std::span<const ClassId> semantic,
                            const std::unordered_set<ClassId>& background_classes, double r_point,
                            int threads) {
  if (coords.size() != semantic.size()) {
    throw InputError("point_aggregate: coords/semantic length mismatch");
  }
  if (!(r_point > 0.0)) {
    throw ConfigError("point_aggregate: r_point must be > 0");
  }
  const std::vector<PointIndex> fg = foreground_indices(semantic, background_classes);
  const std::size_t m = fg.size();
  if (m == 0) {
    return {};
  }

  std::vector<Vec3> fg_coords(m);
  std::vector<ClassId> fg_label(m);
  for (std::size_t k = 0; k < m; ++k) {
    fg_coords[k] = coords[static_cast<std::size_t>(fg[k])];
    fg_label[k] = semantic[static_cast<std::size_t>(fg[k])];
  }

  // Grid cell size equals the query radius: neighbor scans touch 27 cells.
  const SpatialHashGrid grid(fg_coords, r_point);

  // Edge discovery is parallel over points; each slot k holds the same-label
  // neighbors j > k of point k. The sequential union pass below makes the
  // component structure independent of thread count.
  std::vector<std::vector<PointIndex>> forward_edges(m);
  parallel_for(static_cast<std::int64_t>(m), threads, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t k = begin; k < end; ++k) {
      auto& slot = forward_edges[static_cast<std::size_t>(k)];
      const ClassId label = fg_label[static_cast<std::size_t>(k)];
      grid.for_each_neighbor_within(static_cast<PointIndex>(k), r_point, [&](PointIndex j) {
        if (j > k && fg_label[static_cast<std::size_t>(j)] == label) {
          slot.push_back(j);
        }
      });
    }
  });

  UnionFind uf(m);
  for (std::size_t k = 0; k < m; ++k) {
    for (PointIndex j : forward_edges[k]) {
      uf.unite(static_cast<PointIndex>(k), j);
    }
  }
  std::vector<PointIndex> component(m);
  std::vector<PointIndex> root_label(m, -1);
  for (std::size_t k = 0; k < m; ++k) {
    PointIndex root = uf.find(static_cast<PointIndex>(k));
    if (root_label[static_cast<std::size_t>(root)] < 0) {
      root_label[static_cast<std::size_t>(root)] = static_cast<PointIndex>(k);
    }
    component[k] = root_label[static_cast<std::size_t>(root)];
  }
  return assemble_clusters(fg, component, semantic, coords);
}

InstanceSet point_aggregate_bruteforce(std::span<const Vec3> coords,
                                       std::span<const ClassId> semantic,
                                       const std::unordered_set<ClassId>& background_classes,
                                       double r_point) {
  if (coords.size() != semantic.size()) {
    throw InputError("point_aggregate_bruteforce: coords/semantic length mismatch");
  }
  if (!(r_point > 0.0)) {
    throw ConfigError("point_aggregate_bruteforce: r_point must be > 0");
  }
  const std::vector<PointIndex> fg = foreground_indices(semantic, background_classes);
  const std::size_t m = fg.size();
  if (m == 0) {
    return {};
  }
  const double r2 = r_point * r_point;
  UnionFind uf(m);
  for (std::size_t a = 0; a < m; ++a) {
    const Vec3& pa = coords[static_cast<std::size_t>(fg[a])];
    const ClassId la = semantic[static_cast<std::size_t>(fg[a])];
    for (std::size_t b = a + 1; b < m; ++b) {
      if (semantic[static_cast<std::size_t>(fg[b])] != la) {
        continue;
      }
      if (squared_distance(pa, coords[static_cast<std::size_t>(fg[b])]) < r2) {
        uf.unite(static_cast<PointIndex>(a), static_cast<PointIndex>(b));
      }
    }
  }
  std::vector<PointIndex> component(m);
  std::vector<PointIndex> root_label(m, -1);
  for (std::size_t k = 0; k < m; ++k) {
    PointIndex root = uf.find(static_cast<PointIndex>(k));
    if (root_label[static_cast<std::size_t>(root)] < 0) {
      root_label[static_cast<std::size_t>(root)] = static_cast<PointIndex>(k);
    }
    component[k] = root_label[static_cast<std::size_t>(root)];
  }
  return assemble_clusters(fg, component, semantic, coords);
}

InstanceSet gt_instances(const PointCloud& cloud) {
  if (!cloud.has_gt()) {
    throw InputError("gt_instances: cloud has no ground-truth labels");
  }
  std::map<std::int32_t, Cluster> by_id;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const std::int32_t inst = cloud.gt_instance[i];
    if (inst < 0) {
      continue;
    }
    Cluster& c = by_id[inst];
    c.point_indices.push_back(static_cast<PointIndex>(i));
    c.semantic = cloud.gt_semantic[i];
  }
  InstanceSet out;
  out.clusters.reserve(by_id.size());
  for (auto& [id, c] : by_id) {
    c.center = centroid(cloud.positions, c.point_indices);
    out.clusters.push_back(std::move(c));
  }
  return out;
}

}  // namespace hais
