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

#include "udfmesh/extraction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "udfmesh/errors.hpp"
#include "udfmesh/mc_table.hpp"
#include "udfmesh/parallel.hpp"
#include "udfmesh/simd.hpp"

namespace udfmesh {
namespace {

constexpr std::array<std::pair<int, int>, 28> make_pairs() {
  std::array<std::pair<int, int>, 28> pairs{};
  std::size_t p = 0;
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) pairs[p++] = {i, j};
  }
  return pairs;
}

// All 256 occupancies ordered by (triangle count, byte value), with their
// consistent patterns alongside for the argmin kernel.
struct CandidateTable {
  std::array<std::uint8_t, 256> occupancy{};
  alignas(32) std::array<std::uint32_t, 256> masks{};

  CandidateTable() {
    std::array<int, 256> order{};
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [](int a, int b) {
      const int ta = mc::triangle_count(static_cast<unsigned>(a));
      const int tb = mc::triangle_count(static_cast<unsigned>(b));
      return ta < tb || (ta == tb && a < b);
    });
    for (std::size_t i = 0; i < 256; ++i) {
      occupancy[i] = static_cast<std::uint8_t>(order[i]);
      masks[i] = consistent_pattern(occupancy[i]);
    }
  }
};

const CandidateTable& candidates() {
  static const CandidateTable table;
  return table;
}

constexpr std::uint64_t kVertexTag = 3;

std::uint64_t vertex_key(std::size_t lattice_index) { return lattice_index * 4 + kVertexTag; }
std::uint64_t edge_key(std::size_t lattice_index, int axis) {
  return lattice_index * 4 + static_cast<std::uint64_t>(axis);
}

struct CornerData {
  std::array<std::size_t, 8> index;
  std::array<Point3, 8> pos;
};

CornerData cube_corners(const UdfGrid& grid, std::size_t ix, std::size_t iy, std::size_t iz) {
  CornerData c;
  for (int k = 0; k < 8; ++k) {
    const auto& o = mc::kCornerOffsets[k];
    const std::size_t x = ix + o[0], y = iy + o[1], z = iz + o[2];
    c.index[k] = grid.index(x, y, z);
    c.pos[k] = grid.position(x, y, z);
  }
  return c;
}

std::uint32_t cube_pattern(const UdfGrid& grid, const CornerData& c, double tau,
                           CubeDetection* detail) {
  std::uint32_t pattern = 0;
  for (std::size_t p = 0; p < kCubePairs.size(); ++p) {
    const auto [i, j] = kCubePairs[p];
    const std::size_t a = c.index[i];
    const std::size_t b = c.index[j];
    bool hit;
    if (grid.phi[a] < tau || grid.phi[b] < tau) {
      hit = true;
    } else if (grid.ambiguous[a] || grid.ambiguous[b]) {
      hit = false;
    } else {
      hit = detect_edge_intersection(c.pos[i], c.pos[j], grid.phi[a], grid.phi[b], grid.grad[a],
                                     grid.grad[b], tau);
    }
    if (!hit) continue;
    pattern |= 1u << p;
    if (detail) {
      if (grid.phi[a] < tau || grid.phi[b] < tau) {
        detail->points[p] = grid.phi[b] < grid.phi[a] ? c.pos[j] : c.pos[i];
      } else {
        detail->points[p] = intersection_vertex(c.pos[i], c.pos[j], grid.phi[a], grid.phi[b]);
      }
    }
  }
  return pattern;
}

}  // namespace

const std::array<std::pair<int, int>, 28> kCubePairs = make_pairs();

Point3 UdfGrid::position(std::size_t ix, std::size_t iy, std::size_t iz) const {
  const Vec3 cell = cell_size();
  return bbox.min + Vec3(static_cast<double>(ix) * cell.x(), static_cast<double>(iy) * cell.y(),
                         static_cast<double>(iz) * cell.z());
}

Point3 UdfGrid::position(std::size_t vertex) const {
  const std::size_t n = resolution + 1;
  return position(vertex / (n * n), (vertex / n) % n, vertex % n);
}

UdfGrid UdfGrid::allocate(std::size_t resolution, const Aabb& bbox) {
  if (resolution < 1) throw InvalidArgument("grid resolution must be >= 1");
  if (!((bbox.max.array() > bbox.min.array()).all())) {
    throw InvalidArgument("grid bounding box is degenerate");
  }
  UdfGrid g;
  g.resolution = resolution;
  g.bbox = bbox;
  const std::size_t count = g.vertex_count();
  g.phi.assign(count, 0.0);
  g.grad.assign(count, Vec3::Zero());
  g.ambiguous.assign(count, 0);
  return g;
}

Aabb padded_grid_bbox(const Aabb& cloud_box, std::size_t resolution, std::size_t padding_cells) {
  if (resolution <= 2 * padding_cells) {
    throw InvalidArgument("grid resolution too small for the requested padding");
  }
  double extent = cloud_box.extent().maxCoeff();
  if (!(extent > 0.0)) extent = 1.0;
  const double cell = extent / static_cast<double>(resolution - 2 * padding_cells);
  const Vec3 half = Vec3::Constant(0.5 * cell * static_cast<double>(resolution));
  const Point3 c = cloud_box.center();
  return Aabb{c - half, c + half};
}

UdfGrid sample_grid(const UdfSource& field, std::size_t resolution, const Aabb& bbox,
                    unsigned threads) {
  if (resolution < 2) throw InvalidArgument("grid resolution must be >= 2");
  UdfGrid grid = UdfGrid::allocate(resolution, bbox);
  const std::size_t n = grid.vertices_per_axis();
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ix = begin; ix < end; ++ix) {
      for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t iz = 0; iz < n; ++iz) {
          const std::size_t v = grid.index(ix, iy, iz);
          const FieldSample s = field.sample(grid.position(ix, iy, iz));
          grid.phi[v] = s.phi;
          grid.grad[v] = s.grad;
          grid.ambiguous[v] = s.ambiguous ? 1 : 0;
        }
      }
    }
  });
  return grid;
}

bool detect_edge_intersection(const Point3& q1, const Point3& q2, double phi1, double phi2,
                              const Vec3& g1, const Vec3& g2, double tau) {
  if (phi1 < tau || phi2 < tau) return true;
  const Point3 o = 0.5 * (q1 + q2);
  return g1.dot(g2) < 0.0 && g1.dot(q1 - o) > 0.0 && g2.dot(q2 - o) > 0.0;
}

Point3 intersection_vertex(const Point3& q1, const Point3& q2, double phi1, double phi2) {
  const double sum = phi1 + phi2;
  if (!(sum > 0.0)) return 0.5 * (q1 + q2);
  return (q2 * phi1 + q1 * phi2) / sum;
}

std::uint32_t consistent_pattern(std::uint8_t occupancy) {
  std::uint32_t pattern = 0;
  for (std::size_t p = 0; p < kCubePairs.size(); ++p) {
    const auto [i, j] = kCubePairs[p];
    if (((occupancy >> i) ^ (occupancy >> j)) & 1u) pattern |= 1u << p;
  }
  return pattern;
}

unsigned xor_cost(std::uint32_t pattern, std::uint8_t occupancy) {
  return static_cast<unsigned>(std::popcount(pattern ^ consistent_pattern(occupancy)));
}

CubeMatch match_cube_configuration(std::uint32_t pattern) {
  if (pattern == 0) return CubeMatch{0, 0};
  const auto& table = candidates();
  unsigned cost = 0;
  const std::size_t best =
      simd::kernels().argmin_xor_cost(pattern, table.masks.data(), table.masks.size(), &cost);
  return CubeMatch{table.occupancy[best], cost};
}

CubeDetection detect_cube(const UdfGrid& grid, std::size_t ix, std::size_t iy, std::size_t iz,
                          double tau) {
  CubeDetection det;
  const CornerData c = cube_corners(grid, ix, iy, iz);
  det.pattern = cube_pattern(grid, c, tau, &det);
  return det;
}

TriangleMesh extract_mesh(const UdfGrid& grid, double tau, unsigned threads, ExtractionStats* stats) {
  const std::size_t r = grid.resolution;
  if (r < 1 || grid.phi.size() != grid.vertex_count() || grid.grad.size() != grid.vertex_count() ||
      grid.ambiguous.size() != grid.vertex_count()) {
    throw InvalidArgument("grid storage does not match its resolution");
  }
  const double reach = grid.cell_size().norm();
  std::vector<std::uint8_t> cases(r * r * r, 0);
  std::vector<std::uint8_t> nonzero(r * r * r, 0);

  // A true crossing on a connection of length L needs both endpoint
  // distances <= L, so cubes whose nearest corner is farther than the cube
  // diagonal are skipped.
  parallel_for(r, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t ix = begin; ix < end; ++ix) {
      for (std::size_t iy = 0; iy < r; ++iy) {
        for (std::size_t iz = 0; iz < r; ++iz) {
          const CornerData c = cube_corners(grid, ix, iy, iz);
          double nearest = grid.phi[c.index[0]];
          for (int k = 1; k < 8; ++k) nearest = std::min(nearest, grid.phi[c.index[k]]);
          if (nearest > reach && nearest >= tau) continue;
          const std::uint32_t pattern = cube_pattern(grid, c, tau, nullptr);
          const CubeMatch m = match_cube_configuration(pattern);
          const std::size_t cube = (ix * r + iy) * r + iz;
          cases[cube] = m.occupancy;
          nonzero[cube] = m.cost != 0;
        }
      }
    }
  });

  TriangleMesh mesh;
  ExtractionStats local;
  std::unordered_map<std::uint64_t, std::uint32_t> welded;
  auto vertex_on_edge = [&](const CornerData& c, int edge) -> std::uint32_t {
    auto [i, j] = mc::kEdgeCorners[edge];
    if (c.index[j] < c.index[i]) std::swap(i, j);
    const std::size_t a = c.index[i];
    const std::size_t b = c.index[j];
    std::uint64_t key;
    Point3 pos;
    if (grid.phi[a] < tau || grid.phi[b] < tau) {
      const bool take_b = grid.phi[b] < grid.phi[a];
      key = vertex_key(take_b ? b : a);
      pos = take_b ? c.pos[j] : c.pos[i];
    } else {
      int axis = 0;
      const std::size_t delta = b - a;
      if (delta == 1) axis = 2;
      else if (delta == grid.vertices_per_axis()) axis = 1;
      key = edge_key(a, axis);
      pos = intersection_vertex(c.pos[i], c.pos[j], grid.phi[a], grid.phi[b]);
    }
    auto [it, inserted] = welded.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
    if (inserted) {
      mesh.vertices.push_back(pos);
      mesh.edge_keys.push_back(key);
    }
    return it->second;
  };

  struct TriHash {
    std::size_t operator()(const Triangle& t) const noexcept {
      return (std::size_t(t[0]) * 73856093u) ^ (std::size_t(t[1]) * 19349663u) ^
             (std::size_t(t[2]) * 83492791u);
    }
  };
  std::unordered_set<Triangle, TriHash> seen;

  for (std::size_t cube = 0; cube < cases.size(); ++cube) {
    const std::uint8_t occ = cases[cube];
    if (mc::triangle_count(occ) == 0) continue;
    ++local.active_cubes;
    if (nonzero[cube]) ++local.nonzero_cost_cubes;
    const std::size_t ix = cube / (r * r), iy = (cube / r) % r, iz = cube % r;
    const CornerData c = cube_corners(grid, ix, iy, iz);
    const auto& row = mc::kTriangleTable[occ];
    for (int t = 0; row[t] >= 0; t += 3) {
      Triangle tri{vertex_on_edge(c, row[t]), vertex_on_edge(c, row[t + 1]),
                   vertex_on_edge(c, row[t + 2])};
      if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
        ++local.dropped_degenerate;
        continue;
      }
      Triangle sorted = tri;
      std::sort(sorted.begin(), sorted.end());
      if (!seen.insert(sorted).second) {
        ++local.dropped_duplicate;
        continue;
      }
      mesh.triangles.push_back(tri);
    }
  }

  // Snapped vertices of dropped triangles may be left unreferenced.
  std::vector<std::uint32_t> remap(mesh.vertices.size(), UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& tri : mesh.triangles) {
    for (auto& v : tri) {
      if (remap[v] == UINT32_MAX) remap[v] = next++;
      v = remap[v];
    }
  }
  std::vector<Point3> vertices(next);
  std::vector<std::uint64_t> keys(next);
  for (std::size_t v = 0; v < remap.size(); ++v) {
    if (remap[v] == UINT32_MAX) continue;
    vertices[remap[v]] = mesh.vertices[v];
    keys[remap[v]] = mesh.edge_keys[v];
  }
  mesh.vertices = std::move(vertices);
  mesh.edge_keys = std::move(keys);
  if (stats) *stats = local;
  return mesh;
}

}  // namespace udfmesh
