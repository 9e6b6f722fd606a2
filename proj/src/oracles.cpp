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

#include "udfmesh/oracles.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include "udfmesh/errors.hpp"
#include "udfmesh/mc_table.hpp"

namespace udfmesh {
namespace {

constexpr double kOnSurface = 1e-12;
constexpr double kMedial = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Two unit vectors completing n to an orthonormal basis.
std::pair<Vec3, Vec3> plane_basis(const Vec3& n) {
  const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 t1 = n.cross(helper).normalized();
  return {t1, n.cross(t1)};
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

OracleSample from_closest(const Point3& q, const Point3& closest) {
  OracleSample s;
  s.closest = closest;
  const Vec3 d = q - closest;
  s.udf = d.norm();
  if (s.udf >= kOnSurface) s.gradient = d / s.udf;
  return s;
}

OracleSample udf_of(const PlaneShape& p, const Point3& q) {
  const double signed_dist = p.normal.dot(q) - p.offset;
  OracleSample s;
  s.udf = std::abs(signed_dist);
  s.closest = q - signed_dist * p.normal;
  if (s.udf >= kOnSurface) s.gradient = sign_of(signed_dist) * p.normal;
  return s;
}

OracleSample udf_of(const SphereShape& sp, const Point3& q) {
  const Vec3 v = q - sp.center;
  const double len = v.norm();
  OracleSample s;
  if (len < kOnSurface) {
    s.udf = sp.radius;
    s.closest = sp.center + sp.radius * Vec3::UnitX();
    return s;
  }
  const double signed_dist = len - sp.radius;
  s.udf = std::abs(signed_dist);
  s.closest = sp.center + (sp.radius / len) * v;
  if (s.udf >= kOnSurface) s.gradient = (sign_of(signed_dist) / len) * v;
  return s;
}

OracleSample udf_of(const TorusShape& t, const Point3& q) {
  const Vec3 v = q - t.center;
  const double rho = std::hypot(v.x(), v.y());
  OracleSample s;
  if (rho < kMedial) {
    // On the axis every point of a circle is closest.
    const double core = std::hypot(t.major, v.z());
    s.udf = std::abs(core - t.minor);
    const Vec3 dir = Vec3(t.major, 0.0, -v.z()) / core;
    s.closest = q + (core - t.minor) * dir;
    return s;
  }
  const Point3 ring = t.center + Vec3(t.major * v.x() / rho, t.major * v.y() / rho, 0.0);
  const Vec3 w = q - ring;
  const double len = w.norm();
  if (len < kMedial) {
    s.udf = t.minor;
    s.closest = ring + t.minor * Vec3::UnitZ();
    return s;
  }
  const double signed_dist = len - t.minor;
  s.udf = std::abs(signed_dist);
  s.closest = ring + (t.minor / len) * w;
  if (s.udf >= kOnSurface) s.gradient = (sign_of(signed_dist) / len) * w;
  return s;
}

OracleSample udf_of(const BoxShape& b, const Point3& q) {
  const Vec3 local = q - b.center;
  const Vec3 excess = local.cwiseAbs() - b.half;
  if ((excess.array() > 0.0).any()) {
    const Point3 closest = b.center + local.cwiseMax(-b.half).cwiseMin(b.half);
    return from_closest(q, closest);
  }
  // Inside: nearest face wins; ties are on the medial axis.
  int axis = 0;
  const Vec3 depth = -excess;
  depth.minCoeff(&axis);
  OracleSample s;
  s.udf = depth[axis];
  s.closest = q;
  const double side = sign_of(local[axis]);
  s.closest[axis] = b.center[axis] + side * b.half[axis];
  bool tie = false;
  for (int k = 0; k < 3; ++k) {
    if (k != axis && depth[k] - depth[axis] < kOnSurface) tie = true;
  }
  if (local[axis] == 0.0) tie = true;
  if (s.udf >= kOnSurface && !tie) {
    Vec3 g = Vec3::Zero();
    g[axis] = -side;
    s.gradient = g;
  }
  return s;
}

OracleSample udf_of(const DiskShape& d, const Point3& q) {
  const Vec3 v = q - d.center;
  const double h = d.normal.dot(v);
  const Vec3 in_plane = v - h * d.normal;
  const double rho = in_plane.norm();
  if (rho <= d.radius) {
    OracleSample s;
    s.udf = std::abs(h);
    s.closest = d.center + in_plane;
    if (s.udf >= kOnSurface) s.gradient = sign_of(h) * d.normal;
    return s;
  }
  return from_closest(q, d.center + (d.radius / rho) * in_plane);
}

struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine); }
  std::mt19937_64 engine;
};

}  // namespace

void validate_shape(const AnalyticShape& shape) {
  auto unit = [](const Vec3& n) { return std::abs(n.norm() - 1.0) <= 1e-9; };
  const bool ok = std::visit(
      Overloaded{
          [&](const PlaneShape& p) { return unit(p.normal); },
          [](const SphereShape& s) { return s.radius > 0.0; },
          [](const TorusShape& t) { return t.major > 0.0 && t.minor > 0.0 && t.minor < t.major; },
          [](const BoxShape& b) { return (b.half.array() > 0.0).all(); },
          [&](const DiskShape& d) { return d.radius > 0.0 && unit(d.normal); },
      },
      shape);
  if (!ok) throw InvalidArgument("invalid analytic shape parameters");
}

AnalyticShape parse_shape(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw InvalidArgument("empty shape description");
  std::vector<double> v;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(parts[i], &used));
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      throw InvalidArgument("bad number in shape description: " + text);
    }
  }
  const std::string& kind = parts[0];
  auto expect = [&](std::size_t n) {
    if (v.size() != n) throw InvalidArgument("wrong parameter count for shape: " + text);
  };
  AnalyticShape shape;
  if (kind == "sphere") {
    expect(1);
    shape = SphereShape{Point3::Zero(), v[0]};
  } else if (kind == "torus") {
    expect(2);
    shape = TorusShape{Point3::Zero(), v[0], v[1]};
  } else if (kind == "plane") {
    expect(4);
    shape = PlaneShape{Vec3(v[0], v[1], v[2]).normalized(), v[3]};
  } else if (kind == "box") {
    expect(3);
    shape = BoxShape{Point3::Zero(), Vec3(v[0], v[1], v[2])};
  } else if (kind == "disk") {
    expect(1);
    shape = DiskShape{Point3::Zero(), Vec3::UnitZ(), v[0]};
  } else {
    throw InvalidArgument("unknown shape kind: " + kind);
  }
  validate_shape(shape);
  return shape;
}

OracleSample analytic_udf(const AnalyticShape& shape, const Point3& q) {
  return std::visit([&](const auto& s) { return udf_of(s, q); }, shape);
}

double analytic_sdf(const AnalyticShape& shape, const Point3& q) {
  return std::visit(
      Overloaded{
          [&](const PlaneShape& p) { return p.normal.dot(q) - p.offset; },
          [&](const SphereShape& s) { return (q - s.center).norm() - s.radius; },
          [&](const TorusShape& t) {
            const Vec3 v = q - t.center;
            return std::hypot(std::hypot(v.x(), v.y()) - t.major, v.z()) - t.minor;
          },
          [&](const BoxShape& b) {
            const Vec3 e = (q - b.center).cwiseAbs() - b.half;
            return e.cwiseMax(0.0).norm() + std::min(e.maxCoeff(), 0.0);
          },
          [](const DiskShape&) -> double {
            throw InvalidArgument("a disk has no inside: signed distance undefined");
          },
      },
      shape);
}

double surface_area(const AnalyticShape& shape) {
  constexpr double pi = std::numbers::pi;
  return std::visit(
      Overloaded{
          [](const PlaneShape&) { return 1.0; },
          [&](const SphereShape& s) { return 4.0 * pi * s.radius * s.radius; },
          [&](const TorusShape& t) { return 4.0 * pi * pi * t.major * t.minor; },
          [](const BoxShape& b) {
            return 8.0 * (b.half.x() * b.half.y() + b.half.y() * b.half.z() +
                          b.half.x() * b.half.z());
          },
          [&](const DiskShape& d) { return pi * d.radius * d.radius; },
      },
      shape);
}

SurfaceSamples sample_shape_surface(const AnalyticShape& shape, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("need at least one surface sample");
  validate_shape(shape);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Rng rng(seed);
  std::vector<Point3> pts;
  std::vector<Vec3> normals;
  pts.reserve(n);
  normals.reserve(n);
  auto emit = [&](const Point3& p, const Vec3& nrm) {
    pts.push_back(p);
    normals.push_back(nrm);
  };
  while (pts.size() < n) {
    std::visit(
        Overloaded{
            [&](const PlaneShape& p) {
              const auto [t1, t2] = plane_basis(p.normal);
              const double a = rng.uniform() - 0.5;
              const double b = rng.uniform() - 0.5;
              emit(p.offset * p.normal + a * t1 + b * t2, p.normal);
            },
            [&](const SphereShape& s) {
              Vec3 u(rng.normal(), rng.normal(), rng.normal());
              const double len = u.norm();
              if (len < 1e-9) return;
              u /= len;
              emit(s.center + s.radius * u, u);
            },
            [&](const TorusShape& t) {
              const double theta = two_pi * rng.uniform();
              const double phi = two_pi * rng.uniform();
              // Area element is proportional to (R + r cos theta).
              if (rng.uniform() * (t.major + t.minor) > t.major + t.minor * std::cos(theta)) return;
              const double ring = t.major + t.minor * std::cos(theta);
              const Vec3 nrm(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi),
                             std::sin(theta));
              emit(t.center + Vec3(ring * std::cos(phi), ring * std::sin(phi),
                                   t.minor * std::sin(theta)),
                   nrm);
            },
            [&](const BoxShape& b) {
              const double axy = b.half.x() * b.half.y();
              const double ayz = b.half.y() * b.half.z();
              const double axz = b.half.x() * b.half.z();
              const double pick = rng.uniform() * (axy + ayz + axz);
              const int axis = pick < ayz ? 0 : (pick < ayz + axz ? 1 : 2);
              const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
              Vec3 local;
              for (int k = 0; k < 3; ++k) local[k] = (2.0 * rng.uniform() - 1.0) * b.half[k];
              local[axis] = side * b.half[axis];
              Vec3 nrm = Vec3::Zero();
              nrm[axis] = side;
              emit(b.center + local, nrm);
            },
            [&](const DiskShape& d) {
              const auto [t1, t2] = plane_basis(d.normal);
              const double r = d.radius * std::sqrt(rng.uniform());
              const double a = two_pi * rng.uniform();
              emit(d.center + r * std::cos(a) * t1 + r * std::sin(a) * t2, d.normal);
            },
        },
        shape);
  }
  return SurfaceSamples{PointCloud(std::move(pts)), std::move(normals)};
}

Point3 closest_point_on_triangle(const Point3& p, const Point3& a, const Point3& b,
                                 const Point3& c) {
  // Voronoi-region walk over vertices, edges, then the face.
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

MeshClosest mesh_udf_bruteforce(const TriangleMesh& mesh, const Point3& q) {
  if (mesh.triangles.empty()) throw InvalidArgument("distance to an empty mesh");
  MeshClosest best{std::numeric_limits<double>::infinity(), Point3::Zero()};
  for (const auto& t : mesh.triangles) {
    const Point3 c =
        closest_point_on_triangle(q, mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    const double d = (q - c).norm();
    if (d < best.udf) best = MeshClosest{d, c};
  }
  return best;
}

FieldOracle FieldOracle::from_shape(AnalyticShape shape) {
  validate_shape(shape);
  FieldOracle o;
  o.shape_ = std::move(shape);
  return o;
}

FieldOracle FieldOracle::from_mesh(TriangleMesh mesh) {
  if (mesh.triangles.empty()) throw InvalidArgument("mesh oracle needs at least one triangle");
  FieldOracle o;
  o.mesh_ = std::make_shared<const TriangleMesh>(std::move(mesh));
  return o;
}

OracleSample FieldOracle::evaluate(const Point3& q) const {
  if (shape_) return analytic_udf(*shape_, q);
  const MeshClosest mc = mesh_udf_bruteforce(*mesh_, q);
  return from_closest(q, mc.closest);
}

FieldSample OracleField::sample(const Point3& q) const {
  const OracleSample o = oracle_.evaluate(q);
  FieldSample s;
  s.phi = o.udf;
  if (o.gradient) {
    s.grad = *o.gradient;
  } else {
    s.ambiguous = true;
  }
  return s;
}

std::optional<Vec3> finite_difference_gradient(const UdfSource& field, const Point3& q, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite difference step must be > 0");
  Vec3 g;
  for (int k = 0; k < 3; ++k) {
    Point3 hi = q, lo = q;
    hi[k] += h;
    lo[k] -= h;
    g[k] = (field.value(hi) - field.value(lo)) / (2.0 * h);
  }
  const double len = g.norm();
  if (!(len > 0.0)) return std::nullopt;
  return Vec3(g / len);
}

TriangleMesh signed_marching_cubes(const UdfGrid& grid, std::span<const double> sdf) {
  if (sdf.size() != grid.vertex_count()) throw InvalidArgument("signed values do not match grid");
  const std::size_t r = grid.resolution;
  const std::size_t n = grid.vertices_per_axis();
  TriangleMesh mesh;
  std::unordered_map<std::uint64_t, std::uint32_t> welded;
  for (std::size_t ix = 0; ix < r; ++ix) {
    for (std::size_t iy = 0; iy < r; ++iy) {
      for (std::size_t iz = 0; iz < r; ++iz) {
        std::array<std::size_t, 8> idx;
        unsigned cube_case = 0;
        for (int k = 0; k < 8; ++k) {
          const auto& o = mc::kCornerOffsets[k];
          idx[k] = grid.index(ix + o[0], iy + o[1], iz + o[2]);
          if (sdf[idx[k]] < 0.0) cube_case |= 1u << k;
        }
        const auto& row = mc::kTriangleTable[cube_case];
        for (int t = 0; row[t] >= 0; t += 3) {
          Triangle tri;
          for (int e = 0; e < 3; ++e) {
            auto [i, j] = mc::kEdgeCorners[row[t + e]];
            std::size_t a = idx[i], b = idx[j];
            if (b < a) std::swap(a, b);
            const int axis = (b - a == 1) ? 2 : (b - a == n ? 1 : 0);
            const std::uint64_t key = a * 4 + static_cast<std::uint64_t>(axis);
            auto [it, inserted] =
                welded.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
            if (inserted) {
              const double sa = sdf[a], sb = sdf[b];
              const double w = sa / (sa - sb);
              const Point3 pa = grid.position(a), pb = grid.position(b);
              mesh.vertices.push_back(pa + w * (pb - pa));
              mesh.edge_keys.push_back(key);
            }
            tri[e] = it->second;
          }
          if (tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2]) {
            mesh.triangles.push_back(tri);
          }
        }
      }
    }
  }
  return mesh;
}

TriangleMesh icosphere(int levels, double radius, const Point3& center) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < levels; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const auto id = static_cast<std::uint32_t>(v.size() - 1);
      mid.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const std::uint32_t a = midpoint(tri[0], tri[1]);
      const std::uint32_t b = midpoint(tri[1], tri[2]);
      const std::uint32_t c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  TriangleMesh mesh;
  mesh.vertices.reserve(v.size());
  for (const auto& p : v) mesh.vertices.push_back(center + radius * p);
  mesh.triangles = std::move(f);
  return mesh;
}

}  // namespace udfmesh
