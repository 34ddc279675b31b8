#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "hais/clustering.hpp"
#include "hais/geometry.hpp"
#include "hais/point_cloud.hpp"

namespace hais {

/// Per-member foreground probability, aligned with the instance's sorted
/// point_indices. Values lie in [0,1].
struct InstanceMaskPrediction {
  std::vector<double> probabilities;

  std::size_t size() const { return probabilities.size(); }
};

struct ScoredInstance {
  Cluster cluster;
  double score = 0.0;
};

struct MaskScore {
  InstanceMaskPrediction mask;
  double score = 0.0;
};

/// Produces a foreground mask and a certainty score for one instance.
/// Implementations must be deterministic in their inputs.
class MaskProvider {
 public:
  virtual ~MaskProvider() = default;
  virtual MaskScore evaluate(const PointCloud& cloud, const Cluster& instance) const = 0;
};

/// Distance-falloff baseline: probability = exp(-(d / (scale * R))^2) with d
/// the member's distance to the instance centroid and R the instance's mean
/// point-to-centroid radius, both over original positions. Score is the mean
/// member probability.
class HeuristicMaskProvider : public MaskProvider {
 public:
  explicit HeuristicMaskProvider(double scale = 2.0);
  MaskScore evaluate(const PointCloud& cloud, const Cluster& instance) const override;

 private:
  double scale_;
};

/// Ground-truth replay: mask is the membership indicator of the instance's
/// best-matched GT, score is the IoU with that GT. Useful for isolating
/// clustering behavior from mask quality.
class OracleMaskProvider : public MaskProvider {
 public:
  explicit OracleMaskProvider(InstanceSet gts);
  MaskScore evaluate(const PointCloud& cloud, const Cluster& instance) const override;

 private:
  InstanceSet gts_;
};

/// Replays externally computed masks/scores (e.g. network outputs loaded
/// from a prediction file). Entries are keyed by the canonical id of the
/// cluster they belong to; member points absent from an entry get
/// probability 0. Throws InputError when asked about an unknown cluster.
class ReplayMaskProvider : public MaskProvider {
 public:
  struct Entry {
    double score = 0.0;
    std::vector<std::pair<PointIndex, double>> member_probs;
  };

  /// `instances` must be the cluster set the entries were produced for, in
  /// the same order.
  ReplayMaskProvider(std::span<const Entry> entries, const InstanceSet& instances);
  MaskScore evaluate(const PointCloud& cloud, const Cluster& instance) const override;

 private:
  std::map<PointIndex, Entry> by_canonical_id_;
};

/// Keeps members with probability >= threshold and recomputes the center
/// over `coords`. The result may be empty (fully rejected instance). Throws
/// InputError when the mask is not aligned with the instance.
Cluster apply_mask(const Cluster& instance, const InstanceMaskPrediction& mask, double threshold,
                   std::span<const Vec3> coords);

/// Free-function form of the heuristic mask (without the score).
InstanceMaskPrediction heuristic_mask(const PointCloud& cloud, const Cluster& instance,
                                      double scale);

/// |a ∩ b| / |a ∪ b| over sorted index sets; 0 when both are empty.
double instance_iou(std::span<const PointIndex> a, std::span<const PointIndex> b);

struct GtMatch {
  std::int32_t gt_index = -1;  // position in the gts InstanceSet, -1 = none
  double iou = 0.0;
};

/// GT with maximum IoU against the prediction; ties go to the smaller GT
/// index. {-1, 0} when gts is empty.
GtMatch best_match_gt(const Cluster& pred, const InstanceSet& gts);

/// Drops instances below min_points, then orders by descending score with
/// ties by larger size then smaller canonical id. No overlap suppression is
/// performed; overlapping input throws InvariantViolation.
std::vector<ScoredInstance> rank_and_filter(std::vector<ScoredInstance> scored,
                                            std::size_t min_points);

struct RefineResult {
  std::vector<ScoredInstance> instances;  // ranked, disjoint
  std::size_t dropped_empty = 0;          // fully rejected by their mask
  std::size_t dropped_small = 0;          // below min_points after masking
};

/// Runs the mask provider over every instance, applies masks at the given
/// threshold, and ranks the survivors. Per-instance work is parallel; the
/// output does not depend on the thread count.
RefineResult refine_instances(const PointCloud& cloud, const InstanceSet& instances,
                              const MaskProvider& provider, double mask_threshold,
                              std::size_t min_points, int threads = 1);

}  // namespace hais
