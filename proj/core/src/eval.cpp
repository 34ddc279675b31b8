#include "hais/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "hais/errors.hpp"

namespace hais {

namespace {

std::vector<std::size_t> ranking_order(std::span<const ScoredInstance> preds) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&preds](std::size_t a, std::size_t b) {
    const ScoredInstance& pa = preds[a];
    const ScoredInstance& pb = preds[b];
    if (pa.score != pb.score) {
      return pa.score > pb.score;
    }
    if (pa.cluster.size() != pb.cluster.size()) {
      return pa.cluster.size() > pb.cluster.size();
    }
    return pa.cluster.canonical_id() < pb.cluster.canonical_id();
  });
  return order;
}

}  // namespace

OrderedMatchResult match_predictions(std::span<const ScoredInstance> preds,
                                     const InstanceSet& gts, double iou_threshold) {
  OrderedMatchResult result;
  result.order = ranking_order(preds);
  result.pred_is_tp.assign(preds.size(), 0);
  result.pred_matched_gt.assign(preds.size(), -1);
  result.gt_matched.assign(gts.size(), 0);
  for (std::size_t rank = 0; rank < result.order.size(); ++rank) {
    const ScoredInstance& pred = preds[result.order[rank]];
    std::int32_t best_gt = -1;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (result.gt_matched[g] || gts.clusters[g].semantic != pred.cluster.semantic) {
        continue;
      }
      const double iou = instance_iou(pred.cluster.point_indices, gts.clusters[g].point_indices);
      if (iou > best_iou) {  // strict: IoU ties keep the smaller gt index
        best_iou = iou;
        best_gt = static_cast<std::int32_t>(g);
      }
    }
    if (best_gt >= 0 && best_iou >= iou_threshold) {
      result.pred_is_tp[rank] = 1;
      result.pred_matched_gt[rank] = best_gt;
      result.gt_matched[static_cast<std::size_t>(best_gt)] = 1;
    }
  }
  return result;
}

double average_precision(std::span<const std::uint8_t> tp_flags, std::span<const double> scores,
                         std::size_t gt_count) {
  if (tp_flags.size() != scores.size()) {
    throw InputError("average_precision: flags/scores length mismatch");
  }
  if (gt_count == 0) {
    return tp_flags.empty() ? 1.0 : 0.0;
  }
  if (tp_flags.empty()) {
    return 0.0;
  }
  std::vector<std::size_t> order(tp_flags.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&scores](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  // One PR point per distinct score, so equal-score predictions act as a
  // block and their relative order is irrelevant.
  std::vector<double> recall;
  std::vector<double> precision;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (tp_flags[order[k]]) {
      ++tp;
    } else {
      ++fp;
    }
    const bool block_end = (k + 1 == order.size()) || (scores[order[k + 1]] != scores[order[k]]);
    if (block_end) {
      recall.push_back(static_cast<double>(tp) / static_cast<double>(gt_count));
      precision.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    }
  }
  // Precision envelope: p_env(r) = max precision at recall >= r.
  for (std::size_t k = precision.size(); k-- > 1;) {
    precision[k - 1] = std::max(precision[k - 1], precision[k]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < recall.size(); ++k) {
    ap += (recall[k] - prev_recall) * precision[k];
    prev_recall = recall[k];
  }
  return ap;
}

std::optional<CoverageMetrics> coverage_metrics(std::span<const ScoredInstance> preds,
                                                const InstanceSet& gts) {
  if (gts.empty()) {
    return std::nullopt;
  }
  CoverageMetrics out;
  double cov_sum = 0.0;
  double wcov_sum = 0.0;
  std::size_t total_gt_points = 0;
  for (const Cluster& gt : gts.clusters) {
    double best = 0.0;
    for (const ScoredInstance& pred : preds) {
      if (pred.cluster.semantic != gt.semantic) {
        continue;
      }
      best = std::max(best, instance_iou(pred.cluster.point_indices, gt.point_indices));
    }
    cov_sum += best;
    wcov_sum += static_cast<double>(gt.size()) * best;
    total_gt_points += gt.size();
  }
  out.mCov = cov_sum / static_cast<double>(gts.size());
  out.mWCov = wcov_sum / static_cast<double>(total_gt_points);

  const OrderedMatchResult match = match_predictions(preds, gts, 0.5);
  const std::size_t tp = static_cast<std::size_t>(
      std::count(match.pred_is_tp.begin(), match.pred_is_tp.end(), std::uint8_t{1}));
  out.mPrec = preds.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(preds.size());
  out.mRec = static_cast<double>(tp) / static_cast<double>(gts.size());
  return out;
}

std::vector<std::size_t> size_histogram(const InstanceSet& instances,
                                        std::span<const std::size_t> edges) {
  if (edges.size() < 2) {
    throw InputError("size_histogram: need at least two edges");
  }
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k] <= edges[k - 1]) {
      throw InputError("size_histogram: edges must be strictly increasing");
    }
  }
  std::vector<std::size_t> counts(edges.size() - 1, 0);
  for (const Cluster& c : instances.clusters) {
    const std::size_t s = c.size();
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      if (s >= edges[k] && s < edges[k + 1]) {
        ++counts[k];
        break;
      }
    }
  }
  return counts;
}

namespace {

struct ClassPool {
  std::vector<std::uint8_t> tp50, tp25;
  std::vector<std::vector<std::uint8_t>> tp_sweep;  // one per sweep threshold
  std::vector<double> scores;
  std::size_t gt_count = 0;
};

constexpr double kSweepStart = 0.50;
constexpr int kSweepSteps = 10;  // 0.50, 0.55, ..., 0.95

}  // namespace

EvalReport evaluate_scenes(std::span<const EvalScene> scenes) {
  std::map<ClassId, ClassPool> pools;
  EvalReport report;

  InstanceSet all_predictions;
  std::vector<EvalScene const*> scenes_with_gt;

  for (const EvalScene& scene : scenes) {
    std::set<ClassId> classes;
    for (const ScoredInstance& p : scene.predictions) {
      classes.insert(p.cluster.semantic);
      all_predictions.clusters.push_back(p.cluster);
    }
    for (const Cluster& g : scene.gts.clusters) {
      classes.insert(g.semantic);
    }
    report.num_predictions += scene.predictions.size();
    report.num_gt += scene.gts.size();
    if (!scene.gts.empty()) {
      scenes_with_gt.push_back(&scene);
    }

    for (ClassId cls : classes) {
      ClassPool& pool = pools[cls];
      if (pool.tp_sweep.empty()) {
        pool.tp_sweep.resize(kSweepSteps);
      }
      std::vector<ScoredInstance> cls_preds;
      InstanceSet cls_gts;
      for (const ScoredInstance& p : scene.predictions) {
        if (p.cluster.semantic == cls) {
          cls_preds.push_back(p);
        }
      }
      for (const Cluster& g : scene.gts.clusters) {
        if (g.semantic == cls) {
          cls_gts.clusters.push_back(g);
        }
      }
      pool.gt_count += cls_gts.size();

      const auto run_threshold = [&](double threshold, std::vector<std::uint8_t>& sink) {
        const OrderedMatchResult match = match_predictions(cls_preds, cls_gts, threshold);
        // Flags are appended in rank order together with their scores so the
        // pooled (score, flag) pairs stay aligned.
        for (std::size_t rank = 0; rank < match.order.size(); ++rank) {
          sink.push_back(match.pred_is_tp[rank]);
        }
      };
      run_threshold(0.50, pool.tp50);
      run_threshold(0.25, pool.tp25);
      for (int s = 0; s < kSweepSteps; ++s) {
        run_threshold(kSweepStart + 0.05 * s, pool.tp_sweep[static_cast<std::size_t>(s)]);
      }
      for (std::size_t idx : ranking_order(cls_preds)) {
        pool.scores.push_back(cls_preds[idx].score);
      }
    }
  }

  double sum50 = 0.0;
  double sum25 = 0.0;
  double sum_sweep = 0.0;
  std::size_t counted = 0;
  for (const auto& [cls, pool] : pools) {
    if (pool.gt_count == 0 && pool.scores.empty()) {
      continue;  // absent from both GT and predictions: excluded from means
    }
    const double ap50 = average_precision(pool.tp50, pool.scores, pool.gt_count);
    const double ap25 = average_precision(pool.tp25, pool.scores, pool.gt_count);
    double sweep = 0.0;
    for (const auto& flags : pool.tp_sweep) {
      sweep += average_precision(flags, pool.scores, pool.gt_count);
    }
    sweep /= kSweepSteps;
    report.ap50_per_class[cls] = ap50;
    report.ap25_per_class[cls] = ap25;
    report.ap_per_class[cls] = sweep;
    sum50 += ap50;
    sum25 += ap25;
    sum_sweep += sweep;
    ++counted;
  }
  if (counted > 0) {
    report.map50 = sum50 / static_cast<double>(counted);
    report.map25 = sum25 / static_cast<double>(counted);
    report.map = sum_sweep / static_cast<double>(counted);
  }

  // Coverage is pooled over GT instances and prediction counts.
  if (!scenes_with_gt.empty()) {
    CoverageMetrics pooled;
    double cov_sum = 0.0;
    double wcov_sum = 0.0;
    std::size_t gt_instances_total = 0;
    std::size_t gt_points_total = 0;
    std::size_t tp_total = 0;
    std::size_t pred_total = 0;
    for (const EvalScene* scene : scenes_with_gt) {
      const auto metrics = coverage_metrics(scene->predictions, scene->gts);
      std::size_t scene_gt_points = 0;
      for (const Cluster& g : scene->gts.clusters) {
        scene_gt_points += g.size();
      }
      cov_sum += metrics->mCov * static_cast<double>(scene->gts.size());
      wcov_sum += metrics->mWCov * static_cast<double>(scene_gt_points);
      gt_instances_total += scene->gts.size();
      gt_points_total += scene_gt_points;
      const OrderedMatchResult match = match_predictions(scene->predictions, scene->gts, 0.5);
      tp_total += static_cast<std::size_t>(
          std::count(match.pred_is_tp.begin(), match.pred_is_tp.end(), std::uint8_t{1}));
      pred_total += scene->predictions.size();
    }
    pooled.mCov = cov_sum / static_cast<double>(gt_instances_total);
    pooled.mWCov = wcov_sum / static_cast<double>(gt_points_total);
    pooled.mPrec = pred_total == 0
                       ? 0.0
                       : static_cast<double>(tp_total) / static_cast<double>(pred_total);
    pooled.mRec = static_cast<double>(tp_total) / static_cast<double>(gt_instances_total);
    report.coverage = pooled;
  }

  // Log-spaced (power of two) size bins covering every predicted instance.
  std::size_t max_size = 1;
  for (const Cluster& c : all_predictions.clusters) {
    max_size = std::max(max_size, c.size());
  }
  std::size_t edge = 1;
  report.histogram_edges.push_back(edge);
  while (edge <= max_size) {
    edge *= 2;
    report.histogram_edges.push_back(edge);
  }
  report.histogram_counts = size_histogram(all_predictions, report.histogram_edges);
  return report;
}

EvalReport evaluate(std::span<const ScoredInstance> preds, const InstanceSet& gts) {
  EvalScene scene;
  scene.predictions.assign(preds.begin(), preds.end());
  scene.gts = gts;
  return evaluate_scenes(std::span<const EvalScene>(&scene, 1));
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string format_report(const EvalReport& report) {
  std::ostringstream os;
  os << "class      AP_50      AP_25      AP\n";
  for (const auto& [cls, ap50] : report.ap50_per_class) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-8d %10.6f %10.6f %10.6f\n", cls, ap50,
                  report.ap25_per_class.at(cls), report.ap_per_class.at(cls));
    os << line;
  }
  char mean_line[128];
  std::snprintf(mean_line, sizeof(mean_line), "%-8s %10.6f %10.6f %10.6f\n", "mean",
                report.map50, report.map25, report.map);
  os << mean_line;
  if (report.coverage.has_value()) {
    char cov[160];
    std::snprintf(cov, sizeof(cov), "mCov %.6f  mWCov %.6f  mPrec %.6f  mRec %.6f\n",
                  report.coverage->mCov, report.coverage->mWCov, report.coverage->mPrec,
                  report.coverage->mRec);
    os << cov;
  } else {
    os << "coverage metrics: no ground truth\n";
  }
  os << "predictions " << report.num_predictions << "  gt " << report.num_gt << "\n";
  os << "size histogram:";
  for (std::size_t k = 0; k < report.histogram_counts.size(); ++k) {
    os << " [" << report.histogram_edges[k] << "," << report.histogram_edges[k + 1] << "):"
       << report.histogram_counts[k];
  }
  os << "\n";
  return os.str();
}

std::string report_key_values(const EvalReport& report) {
  std::ostringstream os;
  os << "ap50 = " << fmt(report.map50) << "\n";
  os << "ap25 = " << fmt(report.map25) << "\n";
  os << "ap = " << fmt(report.map) << "\n";
  for (const auto& [cls, v] : report.ap50_per_class) {
    os << "ap50.class." << cls << " = " << fmt(v) << "\n";
  }
  for (const auto& [cls, v] : report.ap25_per_class) {
    os << "ap25.class." << cls << " = " << fmt(v) << "\n";
  }
  for (const auto& [cls, v] : report.ap_per_class) {
    os << "ap.class." << cls << " = " << fmt(v) << "\n";
  }
  if (report.coverage.has_value()) {
    os << "mcov = " << fmt(report.coverage->mCov) << "\n";
    os << "mwcov = " << fmt(report.coverage->mWCov) << "\n";
    os << "mprec = " << fmt(report.coverage->mPrec) << "\n";
    os << "mrec = " << fmt(report.coverage->mRec) << "\n";
  }
  os << "num_predictions = " << report.num_predictions << "\n";
  os << "num_gt = " << report.num_gt << "\n";
  for (std::size_t k = 0; k < report.histogram_counts.size(); ++k) {
    os << "histogram." << report.histogram_edges[k] << "." << report.histogram_edges[k + 1]
       << " = " << report.histogram_counts[k] << "\n";
  }
  return os.str();
}

}  // namespace hais
