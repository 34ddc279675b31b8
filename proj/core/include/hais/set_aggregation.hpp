#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hais/clustering.hpp"
#include "hais/geometry.hpp"
#include "hais/point_cloud.hpp"

namespace hais {

/// Which statistic of point-to-centroid distances defines an instance radius.
enum class RadiusStatistic { kMeanDistance, kRmsDistance, kMaxDistance };

/// Class id -> class-specific bandwidth (meters).
class ClassRadii {
 public:
  void set(ClassId cls, double radius);
  std::optional<double> get(ClassId cls) const;
  /// Unknown classes resolve to 0 so the size term dominates.
  double get_or_zero(ClassId cls) const;
  bool contains(ClassId cls) const { return radii_.contains(cls); }
  std::size_t size() const { return radii_.size(); }
  const std::map<ClassId, double>& entries() const { return radii_; }

 private:
  std::map<ClassId, double> radii_;
};

struct AggregationConfig {
  double r_point = 0.03;
  double alpha = 0.01;
  std::size_t primary_size_threshold = 100;
  ClassRadii class_radii;
  std::size_t min_final_points = 100;
  double mask_threshold = 0.5;

  /// Throws ConfigError on non-positive values or mask_threshold outside (0,1).
  void validate() const;
};

struct SplitResult {
  InstanceSet primaries;
  InstanceSet fragments;
};

/// Clusters with size >= threshold become primaries, the rest fragments.
/// Cluster identity (indices, label, center) is preserved.
SplitResult split_primary_fragments(const InstanceSet& instances, std::size_t threshold);

/// Radius of one instance: a statistic of member distances to the centroid.
double instance_radius(std::span<const Vec3> positions, std::span<const PointIndex> members,
                       RadiusStatistic stat = RadiusStatistic::kMeanDistance);

/// Per class, the mean instance radius over all ground-truth instances of
/// that class in the corpus. Throws ConfigError when the corpus is empty or
/// carries no instances; clouds without GT labels throw InputError.
ClassRadii compute_class_radii(std::span<const PointCloud> corpus,
                               RadiusStatistic stat = RadiusStatistic::kMeanDistance);

/// max(alpha * sqrt(size), r_cls[semantic]). A class missing from the radii
/// map contributes 0 and is appended to *missing_classes when provided.
double dynamic_bandwidth(const Cluster& primary, double alpha, const ClassRadii& class_radii,
                         std::vector<ClassId>* missing_classes = nullptr);

struct SetAggregationResult {
  /// Primaries with absorbed fragment points merged in, canonical order;
  /// centers recomputed over the coordinates passed to set_aggregate.
  InstanceSet instances;
  /// Fragments no primary absorbed. Dropped from final predictions but kept
  /// for diagnostics.
  InstanceSet unabsorbed;
  std::size_t absorbed_count = 0;
  std::vector<ClassId> missing_radius_classes;
};

/// For each fragment, finds the nearest primary with an equal semantic label
/// (center-to-center distance, ties to the smaller canonical id) and merges
/// the fragment into it when that distance is strictly below the primary's
/// dynamic bandwidth. Primary centers and bandwidths are the ones computed
/// before any absorption. Throws InvariantViolation when primaries and
/// fragments overlap.
SetAggregationResult set_aggregate(const InstanceSet& primaries, const InstanceSet& fragments,
                                   const AggregationConfig& config,
                                   std::span<const Vec3> coords, int threads = 1);

}  // namespace hais
