#include "hais/refine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hais/errors.hpp"
#include "hais/parallel.hpp"
#include "hais/set_aggregation.hpp"

namespace hais {

HeuristicMaskProvider::HeuristicMaskProvider(double scale) : scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("HeuristicMaskProvider: scale must be > 0");
  }
}

MaskScore HeuristicMaskProvider::evaluate(const PointCloud& cloud,
                                          const Cluster& instance) const {
  MaskScore out;
  out.mask = heuristic_mask(cloud, instance, scale_);
  if (out.mask.probabilities.empty()) {
    out.score = 0.0;
    return out;
  }
  std::vector<double> probs = out.mask.probabilities;
  out.score = stable_sum(probs) / static_cast<double>(probs.size());
  return out;
}

OracleMaskProvider::OracleMaskProvider(InstanceSet gts) : gts_(std::move(gts)) {}

MaskScore OracleMaskProvider::evaluate(const PointCloud& /*cloud*/,
                                       const Cluster& instance) const {
  MaskScore out;
  out.mask.probabilities.assign(instance.size(), 0.0);
  const GtMatch match = best_match_gt(instance, gts_);
  out.score = match.iou;
  if (match.gt_index < 0) {
    return out;
  }
  const auto& gt = gts_.clusters[static_cast<std::size_t>(match.gt_index)].point_indices;
  for (std::size_t k = 0; k < instance.size(); ++k) {
    if (std::binary_search(gt.begin(), gt.end(), instance.point_indices[k])) {
      out.mask.probabilities[k] = 1.0;
    }
  }
  return out;
}

ReplayMaskProvider::ReplayMaskProvider(std::span<const Entry> entries,
                                       const InstanceSet& instances) {
  if (entries.size() != instances.size()) {
    throw InputError("ReplayMaskProvider: " + std::to_string(entries.size()) +
                     " entries for " + std::to_string(instances.size()) + " instances");
  }
  for (std::size_t k = 0; k < entries.size(); ++k) {
    by_canonical_id_[instances.clusters[k].canonical_id()] = entries[k];
  }
}

MaskScore ReplayMaskProvider::evaluate(const PointCloud& /*cloud*/,
                                       const Cluster& instance) const {
  auto it = by_canonical_id_.find(instance.canonical_id());
  if (it == by_canonical_id_.end()) {
    throw InputError("ReplayMaskProvider: no entry for cluster with canonical id " +
                     std::to_string(instance.canonical_id()));
  }
  const Entry& entry = it->second;
  MaskScore out;
  out.score = entry.score;
  out.mask.probabilities.assign(instance.size(), 0.0);
  for (const auto& [point, prob] : entry.member_probs) {
    auto pos = std::lower_bound(instance.point_indices.begin(), instance.point_indices.end(),
                                point);
    if (pos != instance.point_indices.end() && *pos == point) {
      out.mask.probabilities[static_cast<std::size_t>(
          pos - instance.point_indices.begin())] = prob;
    }
  }
  return out;
}

Cluster apply_mask(const Cluster& instance, const InstanceMaskPrediction& mask, double threshold,
                   std::span<const Vec3> coords) {
  if (mask.size() != instance.size()) {
    throw InputError("apply_mask: mask length " + std::to_string(mask.size()) +
                     " != instance size " + std::to_string(instance.size()));
  }
  Cluster out;
  out.semantic = instance.semantic;
  for (std::size_t k = 0; k < instance.size(); ++k) {
    if (mask.probabilities[k] >= threshold) {
      out.point_indices.push_back(instance.point_indices[k]);
    }
  }
  if (!out.point_indices.empty()) {
    out.center = centroid(coords, out.point_indices);
  }
  return out;
}

InstanceMaskPrediction heuristic_mask(const PointCloud& cloud, const Cluster& instance,
                                      double scale) {
  if (instance.size() == 0) {
    throw InputError("heuristic_mask: empty instance");
  }
  if (!(scale > 0.0)) {
    throw ConfigError("heuristic_mask: scale must be > 0");
  }
  const Vec3 center = centroid(cloud.positions, instance.point_indices);
  const double radius =
      instance_radius(cloud.positions, instance.point_indices, RadiusStatistic::kMeanDistance);
  InstanceMaskPrediction mask;
  mask.probabilities.resize(instance.size());
  for (std::size_t k = 0; k < instance.size(); ++k) {
    if (radius == 0.0) {
      mask.probabilities[k] = 1.0;  // all members coincide with the centroid
      continue;
    }
    const double d =
        distance(cloud.positions[static_cast<std::size_t>(instance.point_indices[k])], center);
    const double t = d / (scale * radius);
    mask.probabilities[k] = std::exp(-t * t);
  }
  return mask;
}

double instance_iou(std::span<const PointIndex> a, std::span<const PointIndex> b) {
  if (a.empty() && b.empty()) {
    return 0.0;
  }
  std::size_t inter = 0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] == b[ib]) {
      ++inter;
      ++ia;
      ++ib;
    } else if (a[ia] < b[ib]) {
      ++ia;
    } else {
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

GtMatch best_match_gt(const Cluster& pred, const InstanceSet& gts) {
  GtMatch best;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    const double iou = instance_iou(pred.point_indices, gts.clusters[g].point_indices);
    if (iou > best.iou || best.gt_index < 0) {
      best.iou = iou;
      best.gt_index = static_cast<std::int32_t>(g);
    }
  }
  if (gts.empty()) {
    best.gt_index = -1;
    best.iou = 0.0;
  }
  return best;
}

std::vector<ScoredInstance> rank_and_filter(std::vector<ScoredInstance> scored,
                                            std::size_t min_points) {
  {
    InstanceSet combined;
    combined.clusters.reserve(scored.size());
    for (const ScoredInstance& s : scored) {
      combined.clusters.push_back(s.cluster);
    }
    validate_disjoint(combined, "rank_and_filter");
  }
  std::erase_if(scored, [min_points](const ScoredInstance& s) {
    return s.cluster.size() < min_points;
  });
  std::sort(scored.begin(), scored.end(), [](const ScoredInstance& a, const ScoredInstance& b) {
    if (a.score != b.score) {
      return a.score > b.score;
    }
    if (a.cluster.size() != b.cluster.size()) {
      return a.cluster.size() > b.cluster.size();
    }
    return a.cluster.canonical_id() < b.cluster.canonical_id();
  });
  return scored;
}

RefineResult refine_instances(const PointCloud& cloud, const InstanceSet& instances,
                              const MaskProvider& provider, double mask_threshold,
                              std::size_t min_points, int threads) {
  std::vector<ScoredInstance> refined(instances.size());
  std::vector<std::uint8_t> keep(instances.size(), 0);
  parallel_for(static_cast<std::int64_t>(instances.size()), threads,
               [&](std::int64_t begin, std::int64_t end) {
                 for (std::int64_t k = begin; k < end; ++k) {
                   const Cluster& inst = instances.clusters[static_cast<std::size_t>(k)];
                   const MaskScore ms = provider.evaluate(cloud, inst);
                   if (!(ms.score >= 0.0) || !(ms.score <= 1.0)) {
                     throw InputError("refine_instances: provider score outside [0,1]");
                   }
                   Cluster masked = apply_mask(inst, ms.mask, mask_threshold, cloud.positions);
                   if (masked.point_indices.empty()) {
                     continue;  // fully rejected; counted below
                   }
                   refined[static_cast<std::size_t>(k)] = {std::move(masked), ms.score};
                   keep[static_cast<std::size_t>(k)] = 1;
                 }
               });
  RefineResult result;
  std::vector<ScoredInstance> survivors;
  survivors.reserve(instances.size());
  for (std::size_t k = 0; k < instances.size(); ++k) {
    if (keep[k]) {
      survivors.push_back(std::move(refined[k]));
    } else {
      ++result.dropped_empty;
    }
  }
  const std::size_t before = survivors.size();
  result.instances = rank_and_filter(std::move(survivors), min_points);
  result.dropped_small = before - result.instances.size();
  return result;
}

}  // namespace hais
