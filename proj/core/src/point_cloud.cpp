#include "hais/point_cloud.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "hais/errors.hpp"

namespace hais {

void PointCloud::validate() const {
  const std::size_t n = positions.size();
  if (!colors.empty() && colors.size() != n) {
    throw InputError("PointCloud: colors length " + std::to_string(colors.size()) +
                     " != point count " + std::to_string(n));
  }
  if (!gt_semantic.empty() && gt_semantic.size() != n) {
    throw InputError("PointCloud: gt_semantic length mismatch");
  }
  if (!gt_instance.empty() && gt_instance.size() != n) {
    throw InputError("PointCloud: gt_instance length mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!positions[i].is_finite()) {
      throw InputError("PointCloud: non-finite position at point " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < colors.size(); ++i) {
    const Color& c = colors[i];
    const bool ok = std::isfinite(c.r) && std::isfinite(c.g) && std::isfinite(c.b) &&
                    c.r >= 0.0 && c.r <= 1.0 && c.g >= 0.0 && c.g <= 1.0 && c.b >= 0.0 &&
                    c.b <= 1.0;
    if (!ok) {
      throw InputError("PointCloud: color out of [0,1] at point " + std::to_string(i));
    }
  }
  if (has_gt()) {
    std::unordered_map<std::int32_t, ClassId> instance_class;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int32_t inst = gt_instance[i];
      if (inst < 0) {
        continue;
      }
      auto [it, inserted] = instance_class.emplace(inst, gt_semantic[i]);
      if (!inserted && it->second != gt_semantic[i]) {
        throw InputError("PointCloud: instance " + std::to_string(inst) +
                         " spans multiple semantic classes");
      }
    }
  }
}

}  // namespace hais
