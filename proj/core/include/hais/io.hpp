#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hais/clustering.hpp"
#include "hais/point_cloud.hpp"
#include "hais/refine.hpp"
#include "hais/set_aggregation.hpp"
#include "hais/synth.hpp"

namespace hais {

/// Prediction file contents: per-point labels/shifts plus optional replayed
/// per-instance masks and scores.
struct PredictionFile {
  PerPointPrediction prediction;
  std::vector<ReplayMaskProvider::Entry> replay;

  bool has_replay() const { return !replay.empty(); }
};

/// Formats a double at 9 significant digits, the precision of all text
/// formats in this project.
std::string format_value(double v);

// --- point cloud files ------------------------------------------------
//
// Text format, one point per line, '#' comments and blank lines ignored:
//   HPC v1 <n_points> <fields>
//   x y z [r g b] [sem_id inst_id]
// with <fields> one of xyz, xyzrgb, xyzrgb+gt.

PointCloud load_cloud(const std::filesystem::path& path);
void write_cloud(const PointCloud& cloud, const std::filesystem::path& path);

// --- prediction files ---------------------------------------------------
//
// One line per point: `sem_id dx dy dz`, in cloud order. Optional replay
// sections follow: `INSTANCE <k> <score>` (k = index of the cluster in the
// aggregation output) and one `point_index mask_prob` line per member.

PredictionFile load_predictions(const std::filesystem::path& path, const PointCloud& cloud);
void write_predictions(const PerPointPrediction& pred, const std::filesystem::path& path,
                       std::span<const ReplayMaskProvider::Entry> replay = {});

// --- result export (benchmark submission layout) -------------------------
//
// <out_dir>/<name>.txt lists `<relative_mask_path> <class_id> <confidence>`
// per instance in rank order; each mask file holds one 0/1 per point per
// line.

void export_results(std::span<const ScoredInstance> preds, std::size_t n_points,
                    const std::filesystem::path& out_dir, const std::string& name);

struct ExportedInstance {
  ClassId class_id = -1;
  double confidence = 0.0;
  std::vector<PointIndex> points;
};

/// Reads an exported index file and its mask files back.
std::vector<ExportedInstance> parse_results(const std::filesystem::path& index_path,
                                            std::size_t n_points);

/// Exported instances as ScoredInstances (centers over `positions`).
std::vector<ScoredInstance> exported_as_scored(std::span<const ExportedInstance> exported,
                                               std::span<const Vec3> positions);

// --- class radii table ----------------------------------------------------
//
// One `class_id<TAB>radius_meters` row per class.

ClassRadii load_class_radii(const std::filesystem::path& path);
void write_class_radii(const ClassRadii& radii, const std::filesystem::path& path);

// --- key = value configuration -------------------------------------------

std::map<std::string, std::string> load_config_file(const std::filesystem::path& path);

/// Builds a SceneSpec from config keys (instances_min, instances_max,
/// class_sizes = "<cls>:<min>:<max> ...", shapes = "box sphere plane",
/// extent, scale_min, scale_max, min_separation, background_fraction,
/// background_class, seed). Unknown keys throw ConfigError.
SceneSpec scene_spec_from_config(const std::map<std::string, std::string>& config);

/// NoiseSpec from keys noise_sigma, noise_dropout, noise_semantic_error,
/// noise_seed.
NoiseSpec noise_spec_from_config(const std::map<std::string, std::string>& config);

}  // namespace hais
