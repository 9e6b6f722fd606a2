// Copyright 2026 The udfmesh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace udfmesh {

using Vec3 = Eigen::Vector3d;
using Point3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

bool is_finite(const Vec3& v);

/// Axis-aligned bounding box; `min <= max` componentwise.
struct Aabb {
  Point3 min = Point3::Zero();
  Point3 max = Point3::Zero();

  static Aabb of(std::span<const Point3> points);

  Vec3 extent() const { return max - min; }
  Point3 center() const { return 0.5 * (min + max); }
  bool contains(const Point3& p, double slack = 0.0) const;
};

/// Ordered, finite input samples. Duplicates are allowed and counted.
class PointCloud {
 public:
  PointCloud() = default;
  /// Throws InvalidArgument on non-finite coordinates.
  explicit PointCloud(std::vector<Point3> points);

  const std::vector<Point3>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const Point3& operator[](std::size_t i) const { return points_[i]; }

  /// Number of points that exactly repeat an earlier point.
  std::size_t duplicate_count() const noexcept { return duplicates_; }

 private:
  std::vector<Point3> points_;
  std::size_t duplicates_ = 0;
};

/// Dense samples with unit, unoriented normals. `source_index[j]` is the
/// input point whose patch produced sample j.
struct OrientedPointCloud {
  std::vector<Point3> points;
  std::vector<Vec3> normals;
  std::vector<std::uint32_t> source_index;

  std::size_t size() const noexcept { return points.size(); }
  /// Throws InvalidArgument when lengths differ or a normal is not unit to 1e-9.
  void validate() const;
  PointCloud positions() const { return PointCloud(points); }
};

using Triangle = std::array<std::uint32_t, 3>;

/// Indexed triangle mesh. `edge_keys` (optional) records, per vertex, the
/// lattice edge or lattice vertex it was created on.
struct TriangleMesh {
  std::vector<Point3> vertices;
  std::vector<Triangle> triangles;
  std::vector<std::uint64_t> edge_keys;

  bool empty() const noexcept { return triangles.empty(); }
};

/// Uniform scale + translation mapping a point set into [-0.5, 0.5]^3.
struct Normalization {
  Vec3 center = Vec3::Zero();
  double scale = 1.0;

  static Normalization fit(std::span<const Point3> points);
  Point3 apply(const Point3& p) const { return (p - center) * scale; }
  Point3 invert(const Point3& p) const { return p / scale + center; }
};

}  // namespace udfmesh
