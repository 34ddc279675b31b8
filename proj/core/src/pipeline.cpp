#include "hais/pipeline.hpp"

#include <chrono>
#include <utility>

#include "hais/errors.hpp"

namespace hais {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

PipelineResult run_pipeline(const PointCloud& cloud, const PerPointPrediction& prediction,
                            const PipelineOptions& options, const MaskProvider& mask_provider) {
  options.config.validate();
  prediction.validate();
  if (prediction.size() != cloud.size()) {
    throw InputError("run_pipeline: prediction size does not match cloud");
  }

  PipelineResult result;
  const auto t_total = Clock::now();

  // Point aggregation always runs on the shifted coordinates; the
  // coord-space option only selects which space defines the cluster centers
  // that set aggregation measures distances in.
  const auto t_point = Clock::now();
  std::vector<Vec3> shifted = apply_shift(cloud.positions, prediction.shift);
  const std::span<const Vec3> center_coords = options.coord_space == CoordSpace::kShifted
                                                  ? std::span<const Vec3>(shifted)
                                                  : std::span<const Vec3>(cloud.positions);
  result.preliminary = point_aggregate(shifted, prediction.semantic, options.background_classes,
                                       options.config.r_point, options.threads);
  if (options.coord_space == CoordSpace::kOriginal) {
    recompute_centers(result.preliminary, center_coords);
  }
  result.timings.point_aggregation_ms = ms_since(t_point);

  // Set aggregation: absorb fragments into primaries.
  const auto t_set = Clock::now();
  if (options.use_set_aggregation) {
    SplitResult split =
        split_primary_fragments(result.preliminary, options.config.primary_size_threshold);
    SetAggregationResult agg = set_aggregate(split.primaries, split.fragments, options.config,
                                             center_coords, options.threads);
    result.aggregated = std::move(agg.instances);
    result.unabsorbed = std::move(agg.unabsorbed);
    result.absorbed_count = agg.absorbed_count;
    result.missing_radius_classes = std::move(agg.missing_radius_classes);
  } else {
    result.aggregated = result.preliminary;
  }
  result.timings.set_aggregation_ms = ms_since(t_set);

  // Intra-instance refinement and NMS-free ranking.
  const auto t_refine = Clock::now();
  RefineResult refined =
      refine_instances(cloud, result.aggregated, mask_provider, options.config.mask_threshold,
                       options.config.min_final_points, options.threads);
  result.instances = std::move(refined.instances);
  result.dropped_empty = refined.dropped_empty;
  result.dropped_small = refined.dropped_small;
  result.timings.refine_ms = ms_since(t_refine);

  result.timings.total_ms = ms_since(t_total);
  return result;
}

}  // namespace hais
