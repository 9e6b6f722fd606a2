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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "udfmesh/field.hpp"
#include "udfmesh/geometry.hpp"
#include "udfmesh/oracles.hpp"

namespace udfmesh {

/// 0.5 * mean_a min_b |a - b| + 0.5 * mean_b min_a |a - b| (non-squared).
/// Throws InvalidArgument if either set is empty.
double chamfer_distance(const PointCloud& a, const PointCloud& b, unsigned threads = 1);

struct FScore {
  double f = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// `rec` is sampled from the reconstruction, `gt` from the ground truth.
/// recall = fraction of rec within eps of gt; precision = fraction of gt
/// within eps of rec. A point exactly at distance eps counts as within.
FScore f_score(const PointCloud& rec, const PointCloud& gt, double eps, unsigned threads = 1);

/// Same as f_score for several thresholds, sharing the nearest-neighbor sweep.
std::vector<FScore> f_scores(const PointCloud& rec, const PointCloud& gt,
                             const std::vector<double>& eps, unsigned threads = 1);

struct UdfError {
  double mae = 0.0;
  double grad_angle_mean_deg = 0.0;
  std::size_t value_count = 0;  // lattice vertices in the band
  std::size_t angle_count = 0;  // of those, with both gradients defined
};

struct UdfErrorBand {
  double lower = 5e-4;
  double upper = 0.02;
};

/// Compares `field` to `oracle` on the cell-center lattice of
/// [-0.5, 0.5]^3 with `resolution` cells per axis, over vertices whose oracle
/// distance lies strictly inside `band`. Ambiguous field gradients and
/// undefined oracle gradients are skipped for the angle.
/// Throws InvalidArgument if no vertex qualifies.
UdfError udf_error_protocol(const UdfSource& field, const FieldOracle& oracle,
                            std::size_t resolution = 64, UdfErrorBand band = {},
                            unsigned threads = 1);

/// 1 - <pred, gt>.
double gradient_cosine_error(const Vec3& pred, const Vec3& gt);

/// Angle between two vectors in degrees, robust near 0 and 180.
double angle_deg(const Vec3& a, const Vec3& b);

/// Area-weighted triangle choice then uniform barycentric sampling.
/// Throws InvalidArgument when the total area is zero.
PointCloud sample_mesh_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

struct ComponentStats {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t faces = 0;
  long long euler() const {
    return static_cast<long long>(vertices) - static_cast<long long>(edges) +
           static_cast<long long>(faces);
  }
};

struct MeshStats {
  std::size_t vertex_count = 0;
  std::size_t triangle_count = 0;
  std::size_t edge_count = 0;
  std::size_t boundary_edges = 0;
  std::size_t nonmanifold_edges = 0;  // incident to more than two triangles
  std::size_t degenerate_triangles = 0;
  std::size_t isolated_vertices = 0;
  long long euler = 0;  // V - E + F over referenced vertices
  /// Components by shared vertices, ordered by their smallest triangle index.
  std::vector<ComponentStats> components;
};

MeshStats mesh_diagnostics(const TriangleMesh& mesh);

}  // namespace udfmesh
