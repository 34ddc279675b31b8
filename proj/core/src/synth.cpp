#include "hais/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hais/errors.hpp"

namespace hais {

namespace {

// splitmix64: tiny, well-mixed, and identical on every platform, which keeps
// generated corpora reproducible across toolchains.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi] inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return lo + next_u64() % (hi - lo + 1);
  }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) {
      u1 = uniform01();
    }
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vec3 normal3() { return {normal(), normal(), normal()}; }
};

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  Rng rng(a ^ (0x632be59bd9b4e019ULL + b * 0x9e3779b97f4a7c15ULL));
  return rng.next_u64();
}

struct Rotation {
  // row-major 3x3
  double m[9];

  Vec3 apply(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
};

Rotation random_rotation(Rng& rng) {
  // Normalized 4D Gaussian gives a uniform unit quaternion.
  double q[4];
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& c : q) {
      c = rng.normal();
      norm2 += c * c;
    }
  } while (norm2 < 1e-12);
  const double inv = 1.0 / std::sqrt(norm2);
  const double w = q[0] * inv, x = q[1] * inv, y = q[2] * inv, z = q[3] * inv;
  Rotation r;
  r.m[0] = 1 - 2 * (y * y + z * z);
  r.m[1] = 2 * (x * y - w * z);
  r.m[2] = 2 * (x * z + w * y);
  r.m[3] = 2 * (x * y + w * z);
  r.m[4] = 1 - 2 * (x * x + z * z);
  r.m[5] = 2 * (y * z - w * x);
  r.m[6] = 2 * (x * z - w * y);
  r.m[7] = 2 * (y * z + w * x);
  r.m[8] = 1 - 2 * (x * x + y * y);
  return r;
}

Vec3 sample_body_point(ShapeKind shape, double scale, Rng& rng) {
  switch (shape) {
    case ShapeKind::kSphere: {
      Vec3 dir;
      double n2 = 0.0;
      do {
        dir = rng.normal3();
        n2 = dir.squared_norm();
      } while (n2 < 1e-12);
      const double r = scale * std::cbrt(rng.uniform01());
      return dir * (r / std::sqrt(n2));
    }
    case ShapeKind::kBox: {
      const double h = scale / std::sqrt(3.0);  // bounding radius == scale
      return {rng.uniform(-h, h), rng.uniform(-h, h), rng.uniform(-h, h)};
    }
    case ShapeKind::kPlanePatch: {
      const double a = scale / std::sqrt(2.0);
      return {rng.uniform(-a, a), rng.uniform(-a, a), rng.normal() * 0.005 * scale};
    }
  }
  return {};
}

}  // namespace

void SceneSpec::validate() const {
  if (min_instances < 1 || max_instances < min_instances) {
    throw ConfigError("SceneSpec: instance count range invalid");
  }
  if (class_sizes.empty()) {
    throw ConfigError("SceneSpec: no foreground classes configured");
  }
  for (const auto& [cls, range] : class_sizes) {
    if (cls == background_class) {
      throw ConfigError("SceneSpec: class " + std::to_string(cls) +
                        " collides with the background class");
    }
    if (range.min_points < 1 || range.max_points < range.min_points) {
      throw ConfigError("SceneSpec: size range invalid for class " + std::to_string(cls));
    }
  }
  if (shapes.empty()) {
    throw ConfigError("SceneSpec: no shapes configured");
  }
  if (!(extent > 0.0)) {
    throw ConfigError("SceneSpec: extent must be > 0");
  }
  if (!(instance_scale_min > 0.0) || instance_scale_max < instance_scale_min) {
    throw ConfigError("SceneSpec: instance scale range invalid");
  }
  if (min_separation < 0.0) {
    throw ConfigError("SceneSpec: min_separation must be >= 0");
  }
  if (background_fraction < 0.0 || background_fraction >= 1.0) {
    throw ConfigError("SceneSpec: background_fraction must lie in [0,1)");
  }
  if (2.0 * instance_scale_max + min_separation >= extent) {
    throw ConfigError("SceneSpec: extent too small for the configured scales");
  }
}

void NoiseSpec::validate() const {
  if (shift_noise_sigma < 0.0 || !std::isfinite(shift_noise_sigma)) {
    throw ConfigError("NoiseSpec: shift_noise_sigma must be >= 0");
  }
  if (shift_dropout_fraction < 0.0 || shift_dropout_fraction > 1.0) {
    throw ConfigError("NoiseSpec: shift_dropout_fraction must lie in [0,1]");
  }
  if (semantic_error_rate < 0.0 || semantic_error_rate > 1.0) {
    throw ConfigError("NoiseSpec: semantic_error_rate must lie in [0,1]");
  }
}

PointCloud generate_scene(const SceneSpec& spec) {
  spec.validate();
  Rng rng(mix_seed(spec.seed, 0x5ce7e0));

  const std::size_t count = spec.min_instances == spec.max_instances
                                ? spec.min_instances
                                : static_cast<std::size_t>(
                                      rng.uniform_int(spec.min_instances, spec.max_instances));
  std::vector<ClassId> class_list;
  class_list.reserve(spec.class_sizes.size());
  for (const auto& [cls, range] : spec.class_sizes) {
    class_list.push_back(cls);
  }

  struct Placement {
    Vec3 center;
    double scale;
    ClassId cls;
    std::size_t points;
    ShapeKind shape;
  };
  std::vector<Placement> placements;
  placements.reserve(count);
  const double margin = spec.instance_scale_max;
  constexpr int kMaxRetries = 1000;
  for (std::size_t i = 0; i < count; ++i) {
    Placement p;
    p.cls = class_list[rng.uniform_int(0, class_list.size() - 1)];
    const SizeRange& range = spec.class_sizes.at(p.cls);
    p.points = static_cast<std::size_t>(rng.uniform_int(range.min_points, range.max_points));
    p.scale = rng.uniform(spec.instance_scale_min, spec.instance_scale_max);
    p.shape = spec.shapes[rng.uniform_int(0, spec.shapes.size() - 1)];
    bool placed = false;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
      const Vec3 candidate{rng.uniform(margin, spec.extent - margin),
                           rng.uniform(margin, spec.extent - margin),
                           rng.uniform(margin, spec.extent - margin)};
      bool ok = true;
      for (const Placement& other : placements) {
        if (distance(candidate, other.center) < p.scale + other.scale + spec.min_separation) {
          ok = false;
          break;
        }
      }
      if (ok) {
        p.center = candidate;
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw GenerationError("generate_scene: could not place instance " + std::to_string(i) +
                            " after " + std::to_string(kMaxRetries) + " attempts");
    }
    placements.push_back(p);
  }

  PointCloud cloud;
  std::size_t foreground_total = 0;
  for (const Placement& p : placements) {
    foreground_total += p.points;
  }
  const std::size_t background_count =
      spec.background_fraction == 0.0
          ? 0
          : static_cast<std::size_t>(std::llround(
                spec.background_fraction / (1.0 - spec.background_fraction) *
                static_cast<double>(foreground_total)));
  cloud.positions.reserve(foreground_total + background_count);
  cloud.colors.reserve(foreground_total + background_count);
  cloud.gt_semantic.reserve(foreground_total + background_count);
  cloud.gt_instance.reserve(foreground_total + background_count);

  for (std::size_t i = 0; i < placements.size(); ++i) {
    const Placement& p = placements[i];
    const Rotation rot = random_rotation(rng);
    const Color color{rng.uniform(0.1, 0.95), rng.uniform(0.1, 0.95), rng.uniform(0.1, 0.95)};
    for (std::size_t k = 0; k < p.points; ++k) {
      const Vec3 local = sample_body_point(p.shape, p.scale, rng);
      cloud.positions.push_back(p.center + rot.apply(local));
      cloud.colors.push_back(color);
      cloud.gt_semantic.push_back(p.cls);
      cloud.gt_instance.push_back(static_cast<std::int32_t>(i));
    }
  }
  for (std::size_t k = 0; k < background_count; ++k) {
    cloud.positions.push_back({rng.uniform(0.0, spec.extent), rng.uniform(0.0, spec.extent),
                               rng.uniform(0.0, spec.extent)});
    cloud.colors.push_back({rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8),
                            rng.uniform(0.2, 0.8)});
    cloud.gt_semantic.push_back(spec.background_class);
    cloud.gt_instance.push_back(-1);
  }
  return cloud;
}

PointCloud generate_scene(const SceneSpec& spec, std::uint64_t scene_index) {
  SceneSpec derived = spec;
  derived.seed = mix_seed(spec.seed, scene_index + 1);
  return generate_scene(derived);
}

PerPointPrediction oracle_predictions(const PointCloud& cloud, ClassId background_class) {
  if (!cloud.has_gt()) {
    throw InputError("oracle_predictions: cloud has no ground-truth labels");
  }
  const InstanceSet gts = gt_instances(cloud);
  std::vector<Vec3> instance_center(gts.size());
  std::vector<std::int32_t> instance_of_point(cloud.size(), -1);
  for (std::size_t g = 0; g < gts.size(); ++g) {
    instance_center[g] = gts.clusters[g].center;
    for (PointIndex i : gts.clusters[g].point_indices) {
      instance_of_point[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(g);
    }
  }
  PerPointPrediction pred;
  pred.semantic.resize(cloud.size());
  pred.shift.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const std::int32_t g = instance_of_point[i];
    if (g >= 0) {
      pred.semantic[i] = cloud.gt_semantic[i];
      pred.shift[i] = instance_center[static_cast<std::size_t>(g)] - cloud.positions[i];
    } else {
      pred.semantic[i] =
          cloud.gt_semantic[i] >= 0 ? cloud.gt_semantic[i] : background_class;
      pred.shift[i] = Vec3{};
    }
  }
  return pred;
}

PerPointPrediction degrade_predictions(const PerPointPrediction& pred, const NoiseSpec& noise) {
  pred.validate();
  noise.validate();
  PerPointPrediction out = pred;
  if (noise.shift_noise_sigma == 0.0 && noise.shift_dropout_fraction == 0.0 &&
      noise.semantic_error_rate == 0.0) {
    return out;
  }
  std::vector<ClassId> classes(pred.semantic.begin(), pred.semantic.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  for (std::size_t i = 0; i < pred.size(); ++i) {
    Rng rng(mix_seed(noise.seed, 0x0de9 + i));
    // Fixed draw order per point keeps the stream layout independent of
    // which noise terms are active.
    const Vec3 jitter = rng.normal3();
    const double dropout_draw = rng.uniform01();
    const double flip_draw = rng.uniform01();
    const std::uint64_t flip_choice = rng.next_u64();

    if (noise.shift_noise_sigma > 0.0) {
      out.shift[i] += jitter * noise.shift_noise_sigma;
    }
    if (dropout_draw < noise.shift_dropout_fraction) {
      out.shift[i] = Vec3{};
    }
    if (flip_draw < noise.semantic_error_rate && classes.size() > 1) {
      const std::size_t own =
          static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(),
                                                    pred.semantic[i]) -
                                   classes.begin());
      std::size_t pick = flip_choice % (classes.size() - 1);
      if (pick >= own) {
        ++pick;
      }
      out.semantic[i] = classes[pick];
    }
  }
  return out;
}

}  // namespace hais
