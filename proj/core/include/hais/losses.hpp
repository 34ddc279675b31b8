#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hais/geometry.hpp"

namespace hais {

/// Center-shift regression input. is_foreground selects the points that
/// contribute; background points are ignored.
struct ShiftLossInput {
  std::vector<Vec3> gt_shift;
  std::vector<Vec3> pred_shift;
  std::vector<std::uint8_t> is_foreground;
};

struct ShiftLossResult {
  double loss = 0.0;
  std::vector<Vec3> grad;  // d loss / d pred_shift
};

/// Weighted L1 over foreground points, averaged by the foreground count:
///   loss = (1/|fg|) * sum_fg min(||gt||_2, 1) * ||gt - pred||_1.
/// The L1 subgradient at an exact tie is 0. Zero foreground points yield
/// loss 0 with a zero gradient.
ShiftLossResult shift_loss(const ShiftLossInput& input);

/// One instance's mask supervision: per-member probabilities, binary labels,
/// and the instance's IoU against its matched GT.
struct MaskLossInput {
  std::vector<double> probabilities;   // in [0,1]; clamped internally
  std::vector<std::uint8_t> labels;    // 0/1
  double iou = 0.0;
};

struct MaskLossResult {
  double loss = 0.0;
  std::vector<std::vector<double>> grads;  // per instance, d loss / d probability
};

/// Binary cross-entropy summed over the points of instances with iou > 0.5,
/// normalized by the total point count of those instances. Instances at
/// iou <= 0.5 contribute nothing (their gradients are exactly zero).
MaskLossResult mask_loss(std::span<const MaskLossInput> inputs);

struct ScoreLossInput {
  double predicted_score = 0.0;  // in [0,1]; clamped internally
  double target_iou = 0.0;       // in [0,1]
};

struct ScoreLossResult {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Soft-target cross-entropy averaged over instances:
///   loss = -(1/N) * sum_i [iou_i log s_i + (1-iou_i) log(1-s_i)].
/// Minimized at s_i == iou_i.
ScoreLossResult score_loss(std::span<const ScoreLossInput> inputs);

struct CeLossResult {
  double loss = 0.0;
  std::vector<double> grad;  // row-major, same shape as logits
};

/// Mean softmax cross-entropy over points. `logits` is row-major with
/// num_classes entries per point. Labels must lie in [0, num_classes).
CeLossResult semantic_ce_loss(std::span<const double> logits, int num_classes,
                              std::span<const ClassId> labels);

/// Unweighted sum of the four loss components. Throws InputError on
/// non-finite input.
double total_loss(double seg, double shift, double mask, double score);

}  // namespace hais
