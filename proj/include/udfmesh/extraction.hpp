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
#include <utility>
#include <vector>

#include "udfmesh/field.hpp"
#include "udfmesh/geometry.hpp"

namespace udfmesh {

/// Regular lattice of (phi, grad) samples. `resolution` counts cells per axis;
/// there are resolution+1 lattice vertices per axis, stored x-major
/// (index = (ix * n + iy) * n + iz with n = resolution + 1).
struct UdfGrid {
  std::size_t resolution = 0;
  Aabb bbox;
  std::vector<double> phi;
  std::vector<Vec3> grad;
  /// Non-zero where the gradient could not be determined.
  std::vector<std::uint8_t> ambiguous;

  std::size_t vertices_per_axis() const noexcept { return resolution + 1; }
  std::size_t vertex_count() const noexcept {
    const std::size_t n = resolution + 1;
    return n * n * n;
  }
  std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const noexcept {
    const std::size_t n = resolution + 1;
    return (ix * n + iy) * n + iz;
  }
  Vec3 cell_size() const { return bbox.extent() / static_cast<double>(resolution); }
  Point3 position(std::size_t ix, std::size_t iy, std::size_t iz) const;
  Point3 position(std::size_t vertex) const;

  /// Allocates storage for a resolution^3-cell grid, all samples zeroed.
  static UdfGrid allocate(std::size_t resolution, const Aabb& bbox);
};

/// Cubic bounding box around `cloud_box` whose cubic cells leave
/// `padding_cells` empty cells on each side of the cloud's largest extent.
Aabb padded_grid_bbox(const Aabb& cloud_box, std::size_t resolution, std::size_t padding_cells);

/// Evaluate `field` at every lattice vertex.
UdfGrid sample_grid(const UdfSource& field, std::size_t resolution, const Aabb& bbox,
                    unsigned threads = 1);

/// Surface-crossing test for the connection q1-q2: true if either phi is below
/// tau, or the gradients oppose each other and each points away from the
/// midpoint o on its own side (<g1, q1 - o> > 0 and <g2, q2 - o> > 0).
bool detect_edge_intersection(const Point3& q1, const Point3& q2, double phi1, double phi2,
                              const Vec3& g1, const Vec3& g2, double tau);

/// (q2 * phi1 + q1 * phi2) / (phi1 + phi2); the midpoint when both are zero.
Point3 intersection_vertex(const Point3& q1, const Point3& q2, double phi1, double phi2);

/// The 28 corner pairs (i, j), i < j, in row-major order; bit p of a detection
/// pattern refers to kCubePairs[p]. Corners use the Marching Cubes numbering.
extern const std::array<std::pair<int, int>, 28> kCubePairs;

/// Per-cube detection results.
struct CubeDetection {
  std::uint32_t pattern = 0;
  std::array<Point3, 28> points{};  // valid where the pattern bit is set

  bool intersects(std::size_t pair) const noexcept { return (pattern >> pair) & 1u; }
};

/// Detection pattern an occupancy assignment would produce: bit p set iff the
/// two corners of pair p have different occupancy.
std::uint32_t consistent_pattern(std::uint8_t occupancy);

/// sum over pairs of XOR(c_ij, XOR(o_i, o_j)).
unsigned xor_cost(std::uint32_t pattern, std::uint8_t occupancy);

struct CubeMatch {
  std::uint8_t occupancy = 0;
  unsigned cost = 0;
};

/// Occupancy minimizing xor_cost over all 256 assignments. Ties go to the
/// assignment with fewer Marching Cubes triangles, then the smaller byte.
CubeMatch match_cube_configuration(std::uint32_t pattern);

/// Run detection on the 28 pairs of the cube whose minimum corner is (ix,iy,iz).
CubeDetection detect_cube(const UdfGrid& grid, std::size_t ix, std::size_t iy, std::size_t iz,
                          double tau);

struct ExtractionStats {
  std::size_t active_cubes = 0;
  std::size_t nonzero_cost_cubes = 0;
  std::size_t dropped_degenerate = 0;
  std::size_t dropped_duplicate = 0;
};

/// Edge-based Marching Cubes over the whole grid. Vertices on shared lattice
/// edges are welded; vertices snapped to a lattice vertex by the tau rule are
/// welded on that vertex. Output order follows cube index.
TriangleMesh extract_mesh(const UdfGrid& grid, double tau, unsigned threads = 1,
                          ExtractionStats* stats = nullptr);

}  // namespace udfmesh
