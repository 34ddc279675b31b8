#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "hais/errors.hpp"

namespace hais {

using PointIndex = std::int32_t;
using ClassId = std::int32_t;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3& o) const = default;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double squared_norm() const { return dot(*this); }
  double norm() const { return std::sqrt(squared_norm()); }
  double norm_l1() const { return std::abs(x) + std::abs(y) + std::abs(z); }

  bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }
inline double squared_distance(const Vec3& a, const Vec3& b) { return (a - b).squared_norm(); }

struct Color {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  constexpr bool operator==(const Color& o) const = default;
};

/// Sum over value-sorted terms. Rounding then depends only on the multiset
/// of values, so results are bit-identical under any input permutation.
inline double stable_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum;
}

namespace detail {

inline Vec3 stable_mean(std::vector<Vec3>& points) {
  std::sort(points.begin(), points.end(), [](const Vec3& a, const Vec3& b) {
    if (a.x != b.x) {
      return a.x < b.x;
    }
    if (a.y != b.y) {
      return a.y < b.y;
    }
    return a.z < b.z;
  });
  Vec3 sum;
  for (const Vec3& p : points) {
    sum += p;
  }
  return sum / static_cast<double>(points.size());
}

}  // namespace detail

/// Componentwise arithmetic mean of the selected points, accumulated in
/// value-sorted order (permutation independent, bitwise).
/// Throws InputError on an empty subset, IndexError on out-of-range indices.
inline Vec3 centroid(std::span<const Vec3> positions, std::span<const PointIndex> subset) {
  if (subset.empty()) {
    throw InputError("centroid: empty subset");
  }
  std::vector<Vec3> selected;
  selected.reserve(subset.size());
  for (PointIndex i : subset) {
    if (i < 0 || static_cast<std::size_t>(i) >= positions.size()) {
      throw IndexError("centroid: point index " + std::to_string(i) + " out of range");
    }
    selected.push_back(positions[static_cast<std::size_t>(i)]);
  }
  return detail::stable_mean(selected);
}

/// Mean of all positions.
inline Vec3 centroid(std::span<const Vec3> positions) {
  if (positions.empty()) {
    throw InputError("centroid: empty point set");
  }
  std::vector<Vec3> selected(positions.begin(), positions.end());
  return detail::stable_mean(selected);
}

}  // namespace hais
