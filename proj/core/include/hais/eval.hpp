#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hais/clustering.hpp"
#include "hais/refine.hpp"

namespace hais {

struct MatchResult {
  std::vector<std::uint8_t> pred_is_tp;     // per prediction, in rank order
  std::vector<std::int32_t> pred_matched_gt;  // gt index or -1
  std::vector<std::uint8_t> gt_matched;
};

/// Greedy detection matching: predictions are visited by descending score
/// (ties by larger size, then smaller canonical id); each one claims its
/// best same-class unmatched GT when the IoU reaches the threshold. The
/// returned vectors follow the visiting order, alongside the visiting order
/// itself in `order` (indices into preds).
struct OrderedMatchResult : MatchResult {
  std::vector<std::size_t> order;
};

OrderedMatchResult match_predictions(std::span<const ScoredInstance> preds,
                                     const InstanceSet& gts, double iou_threshold);

/// Area under the precision-recall curve with the precision envelope
/// (all-point interpolation). Predictions with equal scores are pooled into
/// one curve point, so their relative order never matters. gt_count == 0
/// yields 1.0 when there are no predictions and 0.0 otherwise.
double average_precision(std::span<const std::uint8_t> tp_flags, std::span<const double> scores,
                         std::size_t gt_count);

struct CoverageMetrics {
  double mCov = 0.0;
  double mWCov = 0.0;
  double mPrec = 0.0;
  double mRec = 0.0;
};

/// mCov: mean over GT instances of the best IoU achieved by a same-class
/// prediction. mWCov: the same, weighted by GT size. mPrec / mRec: matched
/// predictions at IoU >= 0.5 over prediction / GT counts. Returns nullopt
/// when there is no GT.
std::optional<CoverageMetrics> coverage_metrics(std::span<const ScoredInstance> preds,
                                                const InstanceSet& gts);

/// Counts instances with edges[k] <= size < edges[k+1]. Edges must be
/// strictly increasing; result has edges.size()-1 entries.
std::vector<std::size_t> size_histogram(const InstanceSet& instances,
                                        std::span<const std::size_t> edges);

struct EvalScene {
  std::vector<ScoredInstance> predictions;
  InstanceSet gts;
};

struct EvalReport {
  std::map<ClassId, double> ap50_per_class;
  std::map<ClassId, double> ap25_per_class;
  std::map<ClassId, double> ap_per_class;  // averaged over IoU 0.50:0.05:0.95
  double map50 = 0.0;
  double map25 = 0.0;
  double map = 0.0;
  std::optional<CoverageMetrics> coverage;
  std::vector<std::size_t> histogram_edges;   // log-spaced over prediction sizes
  std::vector<std::size_t> histogram_counts;
  std::size_t num_predictions = 0;
  std::size_t num_gt = 0;
};

/// Evaluates a corpus: per-class detections are pooled across scenes (with
/// scene-local matching), coverage metrics are pooled over instances, and
/// the size histogram covers all predicted instances.
EvalReport evaluate_scenes(std::span<const EvalScene> scenes);

/// Single-scene convenience wrapper.
EvalReport evaluate(std::span<const ScoredInstance> preds, const InstanceSet& gts);

/// Human-readable table.
std::string format_report(const EvalReport& report);

/// Flat `key = value` lines, machine-readable.
std::string report_key_values(const EvalReport& report);

}  // namespace hais
