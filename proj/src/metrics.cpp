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

#include "udfmesh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <unordered_map>

#include "udfmesh/errors.hpp"
#include "udfmesh/kdtree.hpp"
#include "udfmesh/parallel.hpp"

namespace udfmesh {
namespace {

// Distance from every query to its nearest point of `target`.
std::vector<double> nearest_distances(const PointCloud& queries, const PointCloud& target,
                                      unsigned threads) {
  const KdTree tree(target);
  std::vector<double> out(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = tree.nearest(queries[i]).distance;
  });
  return out;
}

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double fraction_within(const std::vector<double>& d, double eps) {
  std::size_t hits = 0;
  for (double x : d) hits += x <= eps ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(d.size());
}

void require_nonempty(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("metric needs two non-empty point sets");
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace

double chamfer_distance(const PointCloud& a, const PointCloud& b, unsigned threads) {
  require_nonempty(a, b);
  return 0.5 * mean(nearest_distances(a, b, threads)) + 0.5 * mean(nearest_distances(b, a, threads));
}

std::vector<FScore> f_scores(const PointCloud& rec, const PointCloud& gt,
                             const std::vector<double>& eps, unsigned threads) {
  require_nonempty(rec, gt);
  for (double e : eps) {
    if (!(e > 0.0)) throw InvalidArgument("f-score threshold must be > 0");
  }
  const auto rec_to_gt = nearest_distances(rec, gt, threads);
  const auto gt_to_rec = nearest_distances(gt, rec, threads);
  std::vector<FScore> out;
  for (double e : eps) {
    FScore s;
    s.recall = fraction_within(rec_to_gt, e);
    s.precision = fraction_within(gt_to_rec, e);
    const double sum = s.precision + s.recall;
    s.f = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
    out.push_back(s);
  }
  return out;
}

FScore f_score(const PointCloud& rec, const PointCloud& gt, double eps, unsigned threads) {
  return f_scores(rec, gt, {eps}, threads).front();
}

UdfError udf_error_protocol(const UdfSource& field, const FieldOracle& oracle,
                            std::size_t resolution, UdfErrorBand band, unsigned threads) {
  if (resolution < 1) throw InvalidArgument("protocol resolution must be >= 1");
  const std::size_t n = resolution;
  const std::size_t total = n * n * n;
  struct Slot {
    bool in_band = false;
    bool has_angle = false;
    double abs_err = 0.0;
    double angle = 0.0;
  };
  std::vector<Slot> slots(total);
  const double step = 1.0 / static_cast<double>(n);
  parallel_for(total, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      const std::size_t ix = v / (n * n), iy = (v / n) % n, iz = v % n;
      const Point3 q(-0.5 + (static_cast<double>(ix) + 0.5) * step,
                     -0.5 + (static_cast<double>(iy) + 0.5) * step,
                     -0.5 + (static_cast<double>(iz) + 0.5) * step);
      const OracleSample truth = oracle.evaluate(q);
      if (!(truth.udf > band.lower && truth.udf < band.upper)) continue;
      const FieldSample est = field.sample(q);
      Slot& s = slots[v];
      s.in_band = true;
      s.abs_err = std::abs(est.phi - truth.udf);
      if (truth.gradient && !est.ambiguous) {
        s.has_angle = true;
        s.angle = angle_deg(est.grad, *truth.gradient);
      }
    }
  });
  UdfError out;
  double err_sum = 0.0, angle_sum = 0.0;
  for (const Slot& s : slots) {
    if (!s.in_band) continue;
    ++out.value_count;
    err_sum += s.abs_err;
    if (s.has_angle) {
      ++out.angle_count;
      angle_sum += s.angle;
    }
  }
  if (out.value_count == 0) throw InvalidArgument("no lattice vertex falls inside the error band");
  out.mae = err_sum / static_cast<double>(out.value_count);
  if (out.angle_count > 0) out.grad_angle_mean_deg = angle_sum / static_cast<double>(out.angle_count);
  return out;
}

double gradient_cosine_error(const Vec3& pred, const Vec3& gt) { return 1.0 - pred.dot(gt); }

double angle_deg(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b)) * 180.0 / std::numbers::pi;
}

PointCloud sample_mesh_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  std::vector<double> cumulative;
  cumulative.reserve(mesh.triangles.size());
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    total += 0.5 * e1.cross(e2).norm();
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw InvalidArgument("mesh has zero surface area");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point3> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = unit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    if (it == cumulative.end()) --it;
    const auto& t = mesh.triangles[static_cast<std::size_t>(it - cumulative.begin())];
    double r1 = unit(rng), r2 = unit(rng);
    if (r1 + r2 > 1.0) {
      r1 = 1.0 - r1;
      r2 = 1.0 - r2;
    }
    const Point3& a = mesh.vertices[t[0]];
    pts.push_back(a + r1 * (mesh.vertices[t[1]] - a) + r2 * (mesh.vertices[t[2]] - a));
  }
  return PointCloud(std::move(pts));
}

MeshStats mesh_diagnostics(const TriangleMesh& mesh) {
  MeshStats st;
  st.triangle_count = mesh.triangles.size();
  st.vertex_count = mesh.vertices.size();

  std::unordered_map<std::uint64_t, std::uint32_t> edge_use;
  auto edge_key = [](std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::vector<std::uint8_t> referenced(mesh.vertices.size(), 0);
  UnionFind uf(mesh.vertices.size());
  for (const auto& t : mesh.triangles) {
    for (auto v : t) {
      if (v >= mesh.vertices.size()) throw InvalidArgument("triangle references a missing vertex");
      referenced[v] = 1;
    }
    const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || e1.cross(e2).norm() == 0.0) {
      ++st.degenerate_triangles;
    }
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = t[k], b = t[(k + 1) % 3];
      if (a == b) continue;
      ++edge_use[edge_key(a, b)];
    }
    uf.unite(t[0], t[1]);
    uf.unite(t[1], t[2]);
  }
  st.edge_count = edge_use.size();
  for (const auto& [key, count] : edge_use) {
    if (count == 1) ++st.boundary_edges;
    if (count > 2) ++st.nonmanifold_edges;
  }
  std::size_t used = 0;
  for (auto r : referenced) used += r;
  st.isolated_vertices = mesh.vertices.size() - used;
  st.euler = static_cast<long long>(used) - static_cast<long long>(st.edge_count) +
             static_cast<long long>(st.triangle_count);

  std::unordered_map<std::size_t, std::size_t> slot;  // root -> component index
  for (const auto& t : mesh.triangles) {
    const std::size_t root = uf.find(t[0]);
    auto [it, inserted] = slot.try_emplace(root, st.components.size());
    if (inserted) st.components.emplace_back();
    ++st.components[it->second].faces;
  }
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (referenced[v]) ++st.components[slot.at(uf.find(v))].vertices;
  }
  for (const auto& [key, count] : edge_use) {
    ++st.components[slot.at(uf.find(static_cast<std::size_t>(key >> 32)))].edges;
  }
  return st;
}

}  // namespace udfmesh
