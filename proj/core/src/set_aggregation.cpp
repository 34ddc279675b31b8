#include "hais/set_aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "hais/errors.hpp"
#include "hais/parallel.hpp"

namespace hais {

void ClassRadii::set(ClassId cls, double radius) {
  if (radius < 0.0 || !std::isfinite(radius)) {
    throw ConfigError("ClassRadii: radius for class " + std::to_string(cls) +
                      " must be finite and >= 0");
  }
  radii_[cls] = radius;
}

std::optional<double> ClassRadii::get(ClassId cls) const {
  auto it = radii_.find(cls);
  if (it == radii_.end()) {
    return std::nullopt;
  }
  return it->second;
}

double ClassRadii::get_or_zero(ClassId cls) const { return get(cls).value_or(0.0); }

void AggregationConfig::validate() const {
  if (!(r_point > 0.0) || !std::isfinite(r_point)) {
    throw ConfigError("AggregationConfig: r_point must be > 0");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("AggregationConfig: alpha must be > 0");
  }
  if (primary_size_threshold < 1) {
    throw ConfigError("AggregationConfig: primary_size_threshold must be >= 1");
  }
  if (min_final_points < 1) {
    throw ConfigError("AggregationConfig: min_final_points must be >= 1");
  }
  if (!(mask_threshold > 0.0) || !(mask_threshold < 1.0)) {
    throw ConfigError("AggregationConfig: mask_threshold must lie in (0,1)");
  }
}

SplitResult split_primary_fragments(const InstanceSet& instances, std::size_t threshold) {
  if (threshold < 1) {
    throw ConfigError("split_primary_fragments: threshold must be >= 1");
  }
  SplitResult result;
  for (const Cluster& c : instances.clusters) {
    if (c.size() >= threshold) {
      result.primaries.clusters.push_back(c);
    } else {
      result.fragments.clusters.push_back(c);
    }
  }
  return result;
}

double instance_radius(std::span<const Vec3> positions, std::span<const PointIndex> members,
                       RadiusStatistic stat) {
  const Vec3 center = centroid(positions, members);
  std::vector<double> terms;
  terms.reserve(members.size());
  for (PointIndex i : members) {
    const double d = distance(positions[static_cast<std::size_t>(i)], center);
    terms.push_back(stat == RadiusStatistic::kRmsDistance ? d * d : d);
  }
  const double n = static_cast<double>(members.size());
  switch (stat) {
    case RadiusStatistic::kMeanDistance:
      return stable_sum(terms) / n;
    case RadiusStatistic::kRmsDistance:
      return std::sqrt(stable_sum(terms) / n);
    case RadiusStatistic::kMaxDistance:
      return *std::max_element(terms.begin(), terms.end());
  }
  return 0.0;
}

ClassRadii compute_class_radii(std::span<const PointCloud> corpus, RadiusStatistic stat) {
  if (corpus.empty()) {
    throw ConfigError("compute_class_radii: empty corpus");
  }
  std::map<ClassId, std::pair<double, std::size_t>> sums;  // class -> (sum, count)
  for (const PointCloud& cloud : corpus) {
    const InstanceSet gts = gt_instances(cloud);
    for (const Cluster& inst : gts.clusters) {
      const double r = instance_radius(cloud.positions, inst.point_indices, stat);
      auto& [sum, count] = sums[inst.semantic];
      sum += r;
      ++count;
    }
  }
  if (sums.empty()) {
    throw ConfigError("compute_class_radii: corpus contains no ground-truth instances");
  }
  ClassRadii radii;
  for (const auto& [cls, sc] : sums) {
    radii.set(cls, sc.first / static_cast<double>(sc.second));
  }
  return radii;
}

double dynamic_bandwidth(const Cluster& primary, double alpha, const ClassRadii& class_radii,
                         std::vector<ClassId>* missing_classes) {
  if (primary.size() < 1) {
    throw InputError("dynamic_bandwidth: empty primary");
  }
  if (!(alpha > 0.0)) {
    throw ConfigError("dynamic_bandwidth: alpha must be > 0");
  }
  const double r_size = alpha * std::sqrt(static_cast<double>(primary.size()));
  const auto r_cls = class_radii.get(primary.semantic);
  if (!r_cls.has_value() && missing_classes != nullptr) {
    missing_classes->push_back(primary.semantic);
  }
  return std::max(r_size, r_cls.value_or(0.0));
}

SetAggregationResult set_aggregate(const InstanceSet& primaries, const InstanceSet& fragments,
                                   const AggregationConfig& config, std::span<const Vec3> coords,
                                   int threads) {
  config.validate();
  {
    InstanceSet combined;
    combined.clusters.reserve(primaries.size() + fragments.size());
    combined.clusters.insert(combined.clusters.end(), primaries.clusters.begin(),
                             primaries.clusters.end());
    combined.clusters.insert(combined.clusters.end(), fragments.clusters.begin(),
                             fragments.clusters.end());
    validate_disjoint(combined, "set_aggregate");
  }

  SetAggregationResult result;
  result.instances = primaries;

  // Bandwidths are frozen up front, as are the centers carried by the input
  // clusters; absorption never feeds back into either.
  std::vector<double> bandwidth(primaries.size());
  {
    std::set<ClassId> missing;
    for (std::size_t n = 0; n < primaries.size(); ++n) {
      std::vector<ClassId> missing_here;
      bandwidth[n] =
          dynamic_bandwidth(primaries.clusters[n], config.alpha, config.class_radii, &missing_here);
      missing.insert(missing_here.begin(), missing_here.end());
    }
    result.missing_radius_classes.assign(missing.begin(), missing.end());
  }

  // Fragment assignment is pure in the frozen centers, so it parallelizes
  // over fragments; -1 marks an unabsorbed fragment.
  std::vector<std::int64_t> assignment(fragments.size(), -1);
  parallel_for(static_cast<std::int64_t>(fragments.size()), threads,
               [&](std::int64_t begin, std::int64_t end) {
                 for (std::int64_t m = begin; m < end; ++m) {
                   const Cluster& frag = fragments.clusters[static_cast<std::size_t>(m)];
                   std::int64_t best = -1;
                   double best_dist = std::numeric_limits<double>::infinity();
                   PointIndex best_canonical = 0;
                   // Equidistant ties go to the smaller canonical id, so the
                   // choice does not depend on primary input order.
                   for (std::size_t n = 0; n < primaries.size(); ++n) {
                     const Cluster& prim = primaries.clusters[n];
                     if (prim.semantic != frag.semantic) {
                       continue;
                     }
                     const double d = distance(frag.center, prim.center);
                     if (d < best_dist ||
                         (d == best_dist && best >= 0 && prim.canonical_id() < best_canonical)) {
                       best_dist = d;
                       best = static_cast<std::int64_t>(n);
                       best_canonical = prim.canonical_id();
                     }
                   }
                   if (best >= 0 && best_dist < bandwidth[static_cast<std::size_t>(best)]) {
                     assignment[static_cast<std::size_t>(m)] = best;
                   }
                 }
               });

  for (std::size_t m = 0; m < fragments.size(); ++m) {
    const Cluster& frag = fragments.clusters[m];
    if (assignment[m] < 0) {
      result.unabsorbed.clusters.push_back(frag);
      continue;
    }
    Cluster& target = result.instances.clusters[static_cast<std::size_t>(assignment[m])];
    target.point_indices.insert(target.point_indices.end(), frag.point_indices.begin(),
                                frag.point_indices.end());
    ++result.absorbed_count;
  }
  for (Cluster& c : result.instances.clusters) {
    std::sort(c.point_indices.begin(), c.point_indices.end());
  }
  if (!coords.empty()) {
    recompute_centers(result.instances, coords);
  }
  const auto by_canonical = [](const Cluster& a, const Cluster& b) {
    return a.canonical_id() < b.canonical_id();
  };
  std::sort(result.instances.clusters.begin(), result.instances.clusters.end(), by_canonical);
  std::sort(result.unabsorbed.clusters.begin(), result.unabsorbed.clusters.end(), by_canonical);
  return result;
}

}  // namespace hais
