#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hais/clustering.hpp"
#include "hais/geometry.hpp"
#include "hais/point_cloud.hpp"

namespace hais {

enum class ShapeKind { kBox, kSphere, kPlanePatch };

struct SizeRange {
  std::size_t min_points = 0;
  std::size_t max_points = 0;
};

/// Recipe for one synthetic scene. The seed fixes all randomness; identical
/// specs produce bitwise-identical clouds.
struct SceneSpec {
  std::size_t min_instances = 4;
  std::size_t max_instances = 8;
  std::map<ClassId, SizeRange> class_sizes;  // foreground classes and their point-count ranges
  std::vector<ShapeKind> shapes = {ShapeKind::kBox, ShapeKind::kSphere, ShapeKind::kPlanePatch};
  double extent = 6.0;                // scene cube edge, meters
  double instance_scale_min = 0.15;   // bounding radius of an instance body
  double instance_scale_max = 0.4;
  double min_separation = 0.5;        // gap between instance bounding spheres
  double background_fraction = 0.2;   // background share of the final cloud
  ClassId background_class = 0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Noise model for stressing the pipeline: Gaussian jitter on shifts, shift
/// dropout (zeroed shifts), and semantic label flips.
struct NoiseSpec {
  double shift_noise_sigma = 0.0;
  double shift_dropout_fraction = 0.0;
  double semantic_error_rate = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Generates a labeled scene: spatially separated shape primitives plus
/// uniform background points. Instance point counts respect the per-class
/// ranges. Throws GenerationError when placement cannot satisfy the
/// separation constraint after bounded retries.
PointCloud generate_scene(const SceneSpec& spec);

/// Same, with the effective seed derived from (spec.seed, scene_index) so a
/// corpus can be generated in any order.
PointCloud generate_scene(const SceneSpec& spec, std::uint64_t scene_index);

/// Exact predictions from ground truth: shift = instance centroid - point
/// position, semantic = GT label (unlabeled points fall back to
/// background_class with zero shift). Throws InputError when GT is absent.
PerPointPrediction oracle_predictions(const PointCloud& cloud, ClassId background_class = 0);

/// Applies the noise model deterministically; each point's randomness is
/// derived from (noise.seed, point index), so the result is independent of
/// evaluation order. All-zero noise returns the input bitwise.
PerPointPrediction degrade_predictions(const PerPointPrediction& pred, const NoiseSpec& noise);

}  // namespace hais
