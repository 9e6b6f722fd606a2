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

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "udfmesh/extraction.hpp"
#include "udfmesh/field.hpp"
#include "udfmesh/geometry.hpp"

// Shapes with closed-form distance fields, plus brute-force references used
// to validate the estimators and the extractor.
namespace udfmesh {

/// {x : <normal, x> = offset}. Surface sampling covers the unit square
/// (side 1) centered at offset * normal.
struct PlaneShape {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;
};
struct SphereShape {
  Point3 center = Point3::Zero();
  double radius = 0.4;
};
/// Torus around the z axis through `center`.
struct TorusShape {
  Point3 center = Point3::Zero();
  double major = 0.3;
  double minor = 0.1;
};
/// Surface of an axis-aligned box.
struct BoxShape {
  Point3 center = Point3::Zero();
  Vec3 half = Vec3::Constant(0.3);
};
/// Flat disk with a free boundary circle.
struct DiskShape {
  Point3 center = Point3::Zero();
  Vec3 normal = Vec3::UnitZ();
  double radius = 0.4;
};

using AnalyticShape = std::variant<PlaneShape, SphereShape, TorusShape, BoxShape, DiskShape>;

/// Throws InvalidArgument for non-positive sizes or non-unit normals.
void validate_shape(const AnalyticShape& shape);

/// Parses "sphere:r", "torus:R:r", "plane:nx:ny:nz:d", "box:hx:hy:hz",
/// "disk:r". All shapes are centered at the origin; the disk lies in z = 0.
AnalyticShape parse_shape(const std::string& text);

struct OracleSample {
  double udf = 0.0;
  /// Empty on the surface and on the medial axis.
  std::optional<Vec3> gradient;
  Point3 closest = Point3::Zero();
};

OracleSample analytic_udf(const AnalyticShape& shape, const Point3& q);

/// Signed distance (negative inside) for closed shapes and the plane;
/// throws InvalidArgument for the disk.
double analytic_sdf(const AnalyticShape& shape, const Point3& q);

double surface_area(const AnalyticShape& shape);

struct SurfaceSamples {
  PointCloud points;
  std::vector<Vec3> normals;
};

/// Area-uniform samples, deterministic per seed.
SurfaceSamples sample_shape_surface(const AnalyticShape& shape, std::size_t n, std::uint64_t seed);

Point3 closest_point_on_triangle(const Point3& p, const Point3& a, const Point3& b, const Point3& c);

struct MeshClosest {
  double udf = 0.0;
  Point3 closest = Point3::Zero();
};

/// Exact distance to a mesh by scanning every triangle.
MeshClosest mesh_udf_bruteforce(const TriangleMesh& mesh, const Point3& q);

/// Ground truth (udf, gradient, closest point) for an analytic shape or a mesh.
class FieldOracle {
 public:
  static FieldOracle from_shape(AnalyticShape shape);
  static FieldOracle from_mesh(TriangleMesh mesh);

  OracleSample evaluate(const Point3& q) const;

 private:
  std::optional<AnalyticShape> shape_;
  std::shared_ptr<const TriangleMesh> mesh_;
};

/// Exposes an oracle as a UdfSource; undefined gradients come back ambiguous.
class OracleField final : public UdfSource {
 public:
  explicit OracleField(FieldOracle oracle) : oracle_(std::move(oracle)) {}
  FieldSample sample(const Point3& q) const override;
  double value(const Point3& q) const override { return oracle_.evaluate(q).udf; }

 private:
  FieldOracle oracle_;
};

/// Normalized central-difference gradient of field.value(); empty when the
/// differences vanish.
std::optional<Vec3> finite_difference_gradient(const UdfSource& field, const Point3& q, double h);

/// Classic sign-based Marching Cubes over the lattice of `grid` (only its
/// geometry is used) with per-vertex signed values `sdf`.
TriangleMesh signed_marching_cubes(const UdfGrid& grid, std::span<const double> sdf);

/// Icosahedron subdivided `levels` times and projected to the sphere.
TriangleMesh icosphere(int levels, double radius, const Point3& center = Point3::Zero());

}  // namespace udfmesh
