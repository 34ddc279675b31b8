#include "hais/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hais/errors.hpp"

namespace hais {

namespace {

constexpr double kProbEpsilon = 1e-7;

double sign_or_zero(double v) {
  if (v > 0.0) {
    return 1.0;
  }
  if (v < 0.0) {
    return -1.0;
  }
  return 0.0;
}

double clamp_probability(double p, const char* what) {
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw InputError(std::string(what) + ": probability " + std::to_string(p) +
                     " outside [0,1]");
  }
  return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
}

}  // namespace

ShiftLossResult shift_loss(const ShiftLossInput& input) {
  const std::size_t n = input.gt_shift.size();
  if (input.pred_shift.size() != n || input.is_foreground.size() != n) {
    throw InputError("shift_loss: input length mismatch");
  }
  ShiftLossResult result;
  result.grad.assign(n, Vec3{});
  std::size_t fg_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (input.is_foreground[i]) {
      ++fg_count;
    }
  }
  if (fg_count == 0) {
    return result;
  }
  const double inv_fg = 1.0 / static_cast<double>(fg_count);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!input.is_foreground[i]) {
      continue;
    }
    const Vec3& gt = input.gt_shift[i];
    const Vec3 diff = gt - input.pred_shift[i];
    const double weight = std::min(gt.norm(), 1.0);
    total += weight * diff.norm_l1();
    // d|gt - pred|/d pred = -sign(gt - pred), componentwise.
    result.grad[i] = Vec3{-sign_or_zero(diff.x), -sign_or_zero(diff.y), -sign_or_zero(diff.z)} *
                     (weight * inv_fg);
  }
  result.loss = total * inv_fg;
  return result;
}

MaskLossResult mask_loss(std::span<const MaskLossInput> inputs) {
  MaskLossResult result;
  result.grads.resize(inputs.size());
  double denom = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const MaskLossInput& inst = inputs[i];
    if (inst.probabilities.size() != inst.labels.size()) {
      throw InputError("mask_loss: probabilities/labels length mismatch at instance " +
                       std::to_string(i));
    }
    if (!(inst.iou >= 0.0) || !(inst.iou <= 1.0)) {
      throw InputError("mask_loss: iou outside [0,1] at instance " + std::to_string(i));
    }
    result.grads[i].assign(inst.probabilities.size(), 0.0);
    if (inst.iou > 0.5) {
      denom += static_cast<double>(inst.probabilities.size());
    }
  }
  if (denom == 0.0) {
    return result;
  }
  double bce_sum = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const MaskLossInput& inst = inputs[i];
    if (!(inst.iou > 0.5)) {
      continue;  // gated out: contributes nothing, bitwise
    }
    for (std::size_t j = 0; j < inst.probabilities.size(); ++j) {
      const double p = clamp_probability(inst.probabilities[j], "mask_loss");
      const double y = inst.labels[j] ? 1.0 : 0.0;
      bce_sum += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
      result.grads[i][j] = -(y / p - (1.0 - y) / (1.0 - p)) / denom;
    }
  }
  result.loss = -bce_sum / denom;
  return result;
}

ScoreLossResult score_loss(std::span<const ScoreLossInput> inputs) {
  ScoreLossResult result;
  result.grad.assign(inputs.size(), 0.0);
  if (inputs.empty()) {
    return result;
  }
  const double inv_n = 1.0 / static_cast<double>(inputs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const double iou = inputs[i].target_iou;
    if (!(iou >= 0.0) || !(iou <= 1.0)) {
      throw InputError("score_loss: target iou outside [0,1] at instance " + std::to_string(i));
    }
    const double s = clamp_probability(inputs[i].predicted_score, "score_loss");
    sum += iou * std::log(s) + (1.0 - iou) * std::log(1.0 - s);
    result.grad[i] = -(iou / s - (1.0 - iou) / (1.0 - s)) * inv_n;
  }
  result.loss = -sum * inv_n;
  return result;
}

CeLossResult semantic_ce_loss(std::span<const double> logits, int num_classes,
                              std::span<const ClassId> labels) {
  if (num_classes <= 0) {
    throw InputError("semantic_ce_loss: num_classes must be > 0");
  }
  const std::size_t c = static_cast<std::size_t>(num_classes);
  if (labels.empty() || logits.size() != labels.size() * c) {
    throw InputError("semantic_ce_loss: logits shape does not match labels");
  }
  const std::size_t n = labels.size();
  CeLossResult result;
  result.grad.assign(logits.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  double total = 0.0;
  std::vector<double> probs(c);
  for (std::size_t i = 0; i < n; ++i) {
    const ClassId label = labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= c) {
      throw InputError("semantic_ce_loss: invalid label " + std::to_string(label) +
                       " at point " + std::to_string(i));
    }
    const std::span<const double> row = logits.subspan(i * c, c);
    double max_logit = row[0];
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw InputError("semantic_ce_loss: non-finite logit at point " + std::to_string(i));
      }
      max_logit = std::max(max_logit, v);
    }
    double z = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      probs[k] = std::exp(row[k] - max_logit);
      z += probs[k];
    }
    for (std::size_t k = 0; k < c; ++k) {
      probs[k] /= z;
    }
    total += -(row[static_cast<std::size_t>(label)] - max_logit - std::log(z));
    for (std::size_t k = 0; k < c; ++k) {
      const double onehot = (k == static_cast<std::size_t>(label)) ? 1.0 : 0.0;
      result.grad[i * c + k] = (probs[k] - onehot) * inv_n;
    }
  }
  result.loss = total * inv_n;
  return result;
}

double total_loss(double seg, double shift, double mask, double score) {
  if (!std::isfinite(seg) || !std::isfinite(shift) || !std::isfinite(mask) ||
      !std::isfinite(score)) {
    throw InputError("total_loss: non-finite component");
  }
  return seg + shift + mask + score;
}

}  // namespace hais
