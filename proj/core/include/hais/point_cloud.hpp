#pragma once

#include <cstdint>
#include <vector>

#include "hais/geometry.hpp"

namespace hais {

/// A point cloud with optional per-point colors and ground-truth labels.
/// Empty optional vectors mean "absent"; when present their length equals
/// positions.size(). gt_semantic uses -1 for unlabeled points, gt_instance
/// uses -1 for points belonging to no instance.
struct PointCloud {
  std::vector<Vec3> positions;
  std::vector<Color> colors;
  std::vector<ClassId> gt_semantic;
  std::vector<std::int32_t> gt_instance;

  std::size_t size() const { return positions.size(); }
  bool has_colors() const { return !colors.empty(); }
  bool has_gt() const { return !gt_semantic.empty() && !gt_instance.empty(); }

  /// Checks lengths, finiteness, color range, and that every instance id
  /// maps to a single semantic class. Throws InputError on violation.
  void validate() const;
};

}  // namespace hais
