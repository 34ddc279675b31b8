#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "hais/geometry.hpp"
#include "hais/point_cloud.hpp"

namespace hais {

/// Per-point predictor output: a hard semantic label and a 3D center shift
/// per point. Which labels count as background is decided by the consumer.
struct PerPointPrediction {
  std::vector<ClassId> semantic;
  std::vector<Vec3> shift;

  std::size_t size() const { return semantic.size(); }

  /// Lengths equal and shifts finite; throws InputError otherwise.
  void validate() const;
};

/// A disjoint group of points sharing one semantic label. point_indices are
/// sorted and duplicate-free; center is the centroid of the member
/// coordinates in the space the cluster was built in.
struct Cluster {
  std::vector<PointIndex> point_indices;
  ClassId semantic = -1;
  Vec3 center{};

  std::size_t size() const { return point_indices.size(); }
  /// Smallest member index; stable identity used for all tie-breaking.
  PointIndex canonical_id() const { return point_indices.front(); }
};

struct InstanceSet {
  std::vector<Cluster> clusters;

  std::size_t size() const { return clusters.size(); }
  bool empty() const { return clusters.empty(); }
};

/// Throws InvariantViolation if any point index appears in more than one
/// cluster.
void validate_disjoint(const InstanceSet& set, const char* context);

/// Recomputes every cluster center as the centroid of its members over the
/// given coordinates.
void recompute_centers(InstanceSet& set, std::span<const Vec3> coords);

/// Elementwise positions + shifts. Throws InputError on length mismatch or
/// non-finite input.
std::vector<Vec3> apply_shift(std::span<const Vec3> positions, std::span<const Vec3> shifts);

/// Clusters foreground points into the connected components of the graph
/// with an edge between two points when they share a semantic label and
/// their distance in `coords` is strictly below r_point. Background points
/// (labels in background_classes) join no cluster. Cluster centers are
/// centroids over `coords`; clusters are ordered by canonical id. The result
/// does not depend on the thread count.
InstanceSet point_aggregate(std::span<const Vec3> coords, std::span<const ClassId> semantic,
                            const std::unordered_set<ClassId>& background_classes, double r_point,
                            int threads = 1);

/// Same contract as point_aggregate, by exhaustive O(N^2) pairwise edge
/// construction. Test oracle; must agree exactly with point_aggregate.
InstanceSet point_aggregate_bruteforce(std::span<const Vec3> coords,
                                       std::span<const ClassId> semantic,
                                       const std::unordered_set<ClassId>& background_classes,
                                       double r_point);

/// Ground-truth instances of a labeled cloud as an InstanceSet with centers
/// over the original positions. Throws InputError when GT is absent.
InstanceSet gt_instances(const PointCloud& cloud);

}  // namespace hais
