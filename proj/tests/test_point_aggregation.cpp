#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hais/clustering.hpp"
#include "hais/errors.hpp"
#include "testing/oracles.hpp"

using namespace hais;

namespace {

// Clustered test data: a few compact blobs plus scattered background.
struct SyntheticBlobs {
  std::vector<Vec3> shifted;
  std::vector<ClassId> labels;
};

SyntheticBlobs make_blobs(std::mt19937& rng, std::size_t n_instances, std::size_t points_each,
                          double spread, std::size_t background_points) {
  SyntheticBlobs data;
  std::uniform_real_distribution<double> center_coord(0.0, 5.0);
  std::uniform_int_distribution<ClassId> cls(1, 3);
  std::normal_distribution<double> noise(0.0, spread);
  for (std::size_t inst = 0; inst < n_instances; ++inst) {
    const Vec3 center{center_coord(rng), center_coord(rng), center_coord(rng)};
    const ClassId label = cls(rng);
    for (std::size_t k = 0; k < points_each; ++k) {
      data.shifted.push_back(center + Vec3{noise(rng), noise(rng), noise(rng)});
      data.labels.push_back(label);
    }
  }
  std::uniform_real_distribution<double> bg(0.0, 5.0);
  for (std::size_t k = 0; k < background_points; ++k) {
    data.shifted.push_back({bg(rng), bg(rng), bg(rng)});
    data.labels.push_back(0);
  }
  return data;
}

}  // namespace

TEST_CASE("apply_shift is an elementwise sum") {
  const std::vector<Vec3> pos = {{1, 2, 3}, {1, 0, 0}};
  const std::vector<Vec3> shift = {{0, 0, 0}, {-1, 0, 0}};
  const auto shifted = apply_shift(pos, shift);
  CHECK(shifted[0] == Vec3{1, 2, 3});
  CHECK(shifted[1] == Vec3{0, 0, 0});
  CHECK_THROWS_AS(apply_shift(pos, std::vector<Vec3>{{0, 0, 0}}), InputError);
}

TEST_CASE("shifts built from centroids collapse instances") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<Vec3> positions(100);
  for (Vec3& p : positions) {
    p = {coord(rng), coord(rng), coord(rng)};
  }
  // Two synthetic instances, half the points each.
  std::vector<PointIndex> first(50), second(50);
  std::iota(first.begin(), first.end(), 0);
  std::iota(second.begin(), second.end(), 50);
  const Vec3 c1 = centroid(positions, first);
  const Vec3 c2 = centroid(positions, second);
  std::vector<Vec3> shifts(100);
  for (std::size_t i = 0; i < 100; ++i) {
    shifts[i] = (i < 50 ? c1 : c2) - positions[i];
  }
  const auto shifted = apply_shift(positions, shifts);
  for (std::size_t i = 0; i < 100; ++i) {
    const Vec3& target = i < 50 ? c1 : c2;
    CHECK(distance(shifted[i], target) < 1e-9);
  }
}

TEST_CASE("two same-label points within the bandwidth form one cluster") {
  const std::vector<Vec3> coords = {{0, 0, 0}, {0.02, 0, 0}};
  const std::vector<ClassId> labels = {1, 1};
  const InstanceSet set = point_aggregate(coords, labels, {0}, 0.03);
  REQUIRE(set.size() == 1);
  CHECK(set.clusters[0].size() == 2);
  CHECK(set.clusters[0].semantic == 1);
  CHECK(distance(set.clusters[0].center, Vec3{0.01, 0, 0}) < 1e-12);
}

TEST_CASE("different labels never join") {
  const std::vector<Vec3> coords = {{0, 0, 0}, {0.02, 0, 0}};
  const std::vector<ClassId> labels = {1, 2};
  const InstanceSet set = point_aggregate(coords, labels, {0}, 0.03);
  REQUIRE(set.size() == 2);
  CHECK(set.clusters[0].size() == 1);
  CHECK(set.clusters[1].size() == 1);
}

TEST_CASE("background points join no cluster") {
  const std::vector<Vec3> coords = {{0, 0, 0}, {0.01, 0, 0}, {0.02, 0, 0}};
  const std::vector<ClassId> labels = {0, 1, 1};
  const InstanceSet set = point_aggregate(coords, labels, {0}, 0.03);
  REQUIRE(set.size() == 1);
  CHECK(set.clusters[0].point_indices == std::vector<PointIndex>{1, 2});
}

TEST_CASE("empty foreground yields an empty set") {
  const std::vector<Vec3> coords = {{0, 0, 0}};
  const std::vector<ClassId> labels = {0};
  CHECK(point_aggregate(coords, labels, {0}, 0.03).empty());
  CHECK(point_aggregate({}, {}, {0}, 0.03).empty());
}

TEST_CASE("invalid bandwidth is rejected") {
  const std::vector<Vec3> coords = {{0, 0, 0}};
  const std::vector<ClassId> labels = {1};
  CHECK_THROWS_AS(point_aggregate(coords, labels, {0}, 0.0), ConfigError);
  CHECK_THROWS_AS(point_aggregate(coords, labels, {0}, -0.1), ConfigError);
}

TEST_CASE("point_aggregate matches the brute-force oracle on random scenes") {
  std::mt19937 rng(17);
  for (int seed = 0; seed < 20; ++seed) {
    const auto data = make_blobs(rng, 5, 300, 0.01, 150);
    const InstanceSet fast = point_aggregate(data.shifted, data.labels, {0}, 0.03);
    const InstanceSet slow = point_aggregate_bruteforce(data.shifted, data.labels, {0}, 0.03);
    CHECK(testing::as_partition(fast) == testing::as_partition(slow));
  }
}

TEST_CASE("partition property: every foreground point in exactly one cluster") {
  std::mt19937 rng(23);
  const auto data = make_blobs(rng, 6, 200, 0.02, 100);
  const InstanceSet set = point_aggregate(data.shifted, data.labels, {0}, 0.03);
  std::vector<int> seen(data.shifted.size(), 0);
  for (const Cluster& c : set.clusters) {
    CHECK(std::is_sorted(c.point_indices.begin(), c.point_indices.end()));
    for (PointIndex i : c.point_indices) {
      ++seen[static_cast<std::size_t>(i)];
      CHECK(data.labels[static_cast<std::size_t>(i)] == c.semantic);  // label purity
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    CHECK(seen[i] == (data.labels[i] == 0 ? 0 : 1));
  }
}

TEST_CASE("clustering is invariant under point permutation") {
  std::mt19937 rng(31);
  const auto data = make_blobs(rng, 4, 150, 0.015, 50);
  const InstanceSet reference = point_aggregate(data.shifted, data.labels, {0}, 0.03);

  std::vector<PointIndex> perm(data.shifted.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vec3> shuffled_coords(perm.size());
  std::vector<ClassId> shuffled_labels(perm.size());
  for (std::size_t new_idx = 0; new_idx < perm.size(); ++new_idx) {
    shuffled_coords[new_idx] = data.shifted[static_cast<std::size_t>(perm[new_idx])];
    shuffled_labels[new_idx] = data.labels[static_cast<std::size_t>(perm[new_idx])];
  }
  InstanceSet shuffled = point_aggregate(shuffled_coords, shuffled_labels, {0}, 0.03);
  // Map member indices back through the permutation before comparing.
  for (Cluster& c : shuffled.clusters) {
    for (PointIndex& i : c.point_indices) {
      i = perm[static_cast<std::size_t>(i)];
    }
    std::sort(c.point_indices.begin(), c.point_indices.end());
  }
  CHECK(testing::as_partition(shuffled) == testing::as_partition(reference));
}

TEST_CASE("thread count does not change the partition") {
  std::mt19937 rng(37);
  const auto data = make_blobs(rng, 5, 250, 0.02, 120);
  const InstanceSet one = point_aggregate(data.shifted, data.labels, {0}, 0.03, 1);
  for (int threads : {2, 4, 8}) {
    const InstanceSet many = point_aggregate(data.shifted, data.labels, {0}, 0.03, threads);
    REQUIRE(many.size() == one.size());
    for (std::size_t k = 0; k < one.size(); ++k) {
      CHECK(many.clusters[k].point_indices == one.clusters[k].point_indices);
      CHECK(many.clusters[k].semantic == one.clusters[k].semantic);
      // Bit-identical centers, not just close.
      CHECK(many.clusters[k].center == one.clusters[k].center);
    }
  }
}

TEST_CASE("growing r_point only merges clusters") {
  std::mt19937 rng(41);
  const auto data = make_blobs(rng, 5, 120, 0.03, 60);
  const InstanceSet fine = point_aggregate(data.shifted, data.labels, {0}, 0.02);
  const InstanceSet coarse = point_aggregate(data.shifted, data.labels, {0}, 0.06);
  // Refinement check: every fine cluster is contained in one coarse cluster.
  std::vector<PointIndex> coarse_of(data.shifted.size(), -1);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    for (PointIndex i : coarse.clusters[k].point_indices) {
      coarse_of[static_cast<std::size_t>(i)] = static_cast<PointIndex>(k);
    }
  }
  for (const Cluster& c : fine.clusters) {
    const PointIndex owner = coarse_of[static_cast<std::size_t>(c.point_indices.front())];
    CHECK(owner >= 0);
    for (PointIndex i : c.point_indices) {
      CHECK(coarse_of[static_cast<std::size_t>(i)] == owner);
    }
  }
  CHECK(coarse.size() <= fine.size());
}

TEST_CASE("gt_instances groups labeled points") {
  PointCloud cloud;
  cloud.positions = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  cloud.gt_semantic = {1, 1, 2, 0};
  cloud.gt_instance = {0, 0, 1, -1};
  const InstanceSet gts = gt_instances(cloud);
  REQUIRE(gts.size() == 2);
  CHECK(gts.clusters[0].point_indices == std::vector<PointIndex>{0, 1});
  CHECK(gts.clusters[0].semantic == 1);
  CHECK(gts.clusters[1].point_indices == std::vector<PointIndex>{2});
  PointCloud unlabeled;
  unlabeled.positions = {{0, 0, 0}};
  CHECK_THROWS_AS(gt_instances(unlabeled), InputError);
}
