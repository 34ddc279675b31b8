#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "hais/clustering.hpp"
#include "hais/point_cloud.hpp"
#include "hais/refine.hpp"
#include "hais/set_aggregation.hpp"

namespace hais {

/// Which coordinates define cluster centers for set aggregation. Point
/// aggregation itself always clusters the shifted coordinates.
enum class CoordSpace { kShifted, kOriginal };

struct PipelineOptions {
  AggregationConfig config;
  std::unordered_set<ClassId> background_classes = {0};
  bool use_set_aggregation = true;
  CoordSpace coord_space = CoordSpace::kShifted;
  int threads = 1;
};

struct StageTimings {
  double point_aggregation_ms = 0.0;
  double set_aggregation_ms = 0.0;
  double refine_ms = 0.0;
  double total_ms = 0.0;  // wall time around the three stages
};

struct PipelineResult {
  std::vector<ScoredInstance> instances;  // final ranked predictions
  InstanceSet preliminary;                // point aggregation output
  InstanceSet aggregated;                 // after set aggregation, pre-refine
  InstanceSet unabsorbed;                 // fragments nobody absorbed
  StageTimings timings;
  std::size_t absorbed_count = 0;
  std::size_t dropped_empty = 0;
  std::size_t dropped_small = 0;
  std::vector<ClassId> missing_radius_classes;
};

/// Full inference pass: shift, point aggregation, primary/fragment split and
/// set aggregation, mask refinement, ranking. NMS-free: the output is
/// guaranteed pairwise disjoint. Deterministic in its inputs for any thread
/// count.
PipelineResult run_pipeline(const PointCloud& cloud, const PerPointPrediction& prediction,
                            const PipelineOptions& options, const MaskProvider& mask_provider);

}  // namespace hais
