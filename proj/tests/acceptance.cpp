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

// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "udfmesh/cli.hpp"
#include "udfmesh/extraction.hpp"
#include "udfmesh/distance_field.hpp"
#include "udfmesh/io.hpp"
#include "udfmesh/patches.hpp"
#include "udfmesh/mc_table.hpp"
#include "udfmesh/metrics.hpp"
#include "udfmesh/oracles.hpp"
#include "udfmesh/pipeline.hpp"

using namespace udfmesh;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

constexpr std::size_t kInputPoints = 3000;
constexpr std::size_t kEvalSamples = 100000;

const SphereShape kSphere{Point3::Zero(), 0.4};
const TorusShape kTorus{Point3::Zero(), 0.3, 0.1};

// Dense oriented clouds shared by several criteria.
struct DenseSet {
  OrientedPointCloud sphere, torus;
};

const DenseSet& dense_set() {
  static const DenseSet d = [] {
    DenseSet out;
    const PatchParams params;
    out.sphere = upsample(sample_shape_surface(kSphere, kInputPoints, 1).points, params).dense;
    out.torus = upsample(sample_shape_surface(kTorus, kInputPoints, 2).points, params).dense;
    return out;
  }();
  return d;
}

double mesh_vs_shape_cd(const TriangleMesh& mesh, const AnalyticShape& shape) {
  const PointCloud rec = sample_mesh_surface(mesh, kEvalSamples, 11);
  const PointCloud gt = sample_shape_surface(shape, kEvalSamples, 12).points;
  return chamfer_distance(rec, gt);
}

PipelineConfig sphere_config(std::size_t res, std::size_t k) {
  PipelineConfig c;
  c.resolution = res;
  c.field.k = k;
  c.threads = 1;
  return c;
}

const PointCloud& sphere_input() {
  static const PointCloud p = sample_shape_surface(kSphere, kInputPoints, 1).points;
  return p;
}

struct SphereRun {
  std::size_t res, k;
  double cd;
  double surface_error;  // mean analytic distance of mesh samples
};

const SphereRun& sphere_run(std::size_t res, std::size_t k) {
  static std::vector<SphereRun> cache;
  for (const auto& run : cache) {
    if (run.res == res && run.k == k) return run;
  }
  const PipelineResult out = reconstruct(sphere_input(), sphere_config(res, k));
  const PointCloud samples = sample_mesh_surface(out.mesh, kEvalSamples, 11);
  double err = 0.0;
  for (const auto& p : samples.points()) err += analytic_udf(kSphere, p).udf;
  cache.push_back({res, k, mesh_vs_shape_cd(out.mesh, kSphere), err / static_cast<double>(samples.size())});
  return cache.back();
}

double sphere_cd(std::size_t res, std::size_t k) { return sphere_run(res, k).cd; }
double sphere_surface_error(std::size_t res) { return sphere_run(res, 10).surface_error; }

// 1 -------------------------------------------------------------------------
Outcome planar_exactness() {
  const auto t0 = Clock::now();
  const Vec3 n = Vec3(0.3, -0.5, 0.8).normalized();
  const double offset = 0.05;
  const Vec3 t1 = n.cross(Vec3::UnitX()).normalized();
  const Vec3 t2 = n.cross(t1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  OrientedPointCloud dense;
  const int side = 100;
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      const double a = -0.5 + (i + 0.5) / side, b = -0.5 + (j + 0.5) / side;
      dense.points.push_back(offset * n + a * t1 + b * t2);
      dense.normals.push_back(rng() & 1 ? n : Vec3(-n));
      dense.source_index.push_back(static_cast<std::uint32_t>(i * side + j));
    }
  }
  double worst_value = 0.0, worst_angle = 0.0;
  const std::vector<WeightScheme> schemes = {WeightScheme::uniform(), WeightScheme::inverse_distance(),
                                             WeightScheme::gaussian()};
  for (const auto& scheme : schemes) {
    FieldParams p;
    p.value_weights = scheme;
    p.gradient_weights = scheme;
    const DistanceField field(dense, p);
    std::mt19937_64 qrng(8);
    for (int q = 0; q < 1000; ++q) {
      const double a = 0.8 * unit(qrng), b = 0.8 * unit(qrng), h = 0.4 * unit(qrng);
      const Point3 x = offset * n + a * t1 + b * t2 + (h == 0.0 ? 0.1 : h) * n;
      const double truth = std::abs(n.dot(x) - offset);
      const Vec3 true_grad = n.dot(x) - offset < 0.0 ? Vec3(-n) : n;
      const FieldSample s = field.sample(x);
      worst_value = std::max(worst_value, std::abs(s.phi - truth));
      worst_angle = std::max(worst_angle, s.ambiguous ? 180.0 : angle_deg(s.grad, true_grad));
    }
  }
  const double secs = seconds_since(t0);
  const double worst_rad = worst_angle * M_PI / 180.0;
  Outcome o;
  o.pass = worst_value < 1e-12 && worst_rad < 1e-12 && secs < 1.0;
  o.detail = "max |phi-d|=" + fmt("%.3g", worst_value) + " max angle=" + fmt("%.3g", worst_rad) +
             " rad, " + fmt("%.2f", secs) + " s (limits 1e-12, 1e-12 rad, 1 s)";
  return o;
}

// 2 + 3 share the field-error protocol.
struct ProtocolRun {
  UdfError p2t, p2p;
};

ProtocolRun run_protocol(const OrientedPointCloud& dense, const AnalyticShape& shape) {
  const FieldOracle oracle = FieldOracle::from_shape(shape);
  FieldParams p;
  ProtocolRun r;
  r.p2t = udf_error_protocol(DistanceField(dense, p), oracle);
  p.estimator = ValueEstimator::PointToPoint;
  r.p2p = udf_error_protocol(DistanceField(dense, p), oracle);
  return r;
}

const std::pair<ProtocolRun, ProtocolRun>& protocol_runs() {
  static const auto runs = [] {
    const DenseSet& d = dense_set();
    return std::make_pair(run_protocol(d.sphere, kSphere), run_protocol(d.torus, kTorus));
  }();
  return runs;
}

Outcome p2t_beats_p2p() {
  const auto t0 = Clock::now();
  const auto& [sphere, torus] = protocol_runs();
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = sphere.p2t.mae < sphere.p2p.mae && torus.p2t.mae < torus.p2p.mae && sphere.p2t.mae < 2e-3 &&
           torus.p2t.mae < 2e-3 && secs < 30.0;
  o.detail = "sphere P2T " + fmt("%.3e", sphere.p2t.mae) + " vs P2P " + fmt("%.3e", sphere.p2p.mae) +
             "; torus P2T " + fmt("%.3e", torus.p2t.mae) + " vs P2P " + fmt("%.3e", torus.p2p.mae) +
             "; dense " + std::to_string(dense_set().sphere.size()) + " pts; " + fmt("%.1f", secs) +
             " s (limits P2T<P2P, P2T<2e-3, 30 s)";
  return o;
}

Outcome gradient_decoupling() {
  const auto& [sphere, torus] = protocol_runs();
  bool identical = true;
  for (const auto* dense : {&dense_set().sphere, &dense_set().torus}) {
    FieldParams a, b;
    a.value_weights = WeightScheme::gaussian();
    b.value_weights = WeightScheme::uniform();
    const DistanceField fa(*dense, a), fb(*dense, b);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    for (int i = 0; i < 5000; ++i) {
      const Point3 q(unit(rng), unit(rng), unit(rng));
      const FieldSample sa = fa.sample(q), sb = fb.sample(q);
      if (sa.ambiguous != sb.ambiguous || sa.grad.x() != sb.grad.x() || sa.grad.y() != sb.grad.y() ||
          sa.grad.z() != sb.grad.z()) {
        identical = false;
      }
    }
  }
  Outcome o;
  o.pass = identical && sphere.p2t.grad_angle_mean_deg < 10.0 && torus.p2t.grad_angle_mean_deg < 10.0;
  o.detail = "mean angle sphere " + fmt("%.3f", sphere.p2t.grad_angle_mean_deg) + " deg, torus " +
             fmt("%.3f", torus.p2t.grad_angle_mean_deg) + " deg (limit 10); value-weight swap " +
             (identical ? "bitwise identical" : "CHANGED gradients");
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome k_robustness() {
  const double c5 = sphere_cd(64, 5), c10 = sphere_cd(64, 10), c20 = sphere_cd(64, 20);
  const double lo = std::min({c5, c10, c20}), hi = std::max({c5, c10, c20});
  const double rel = (hi - lo) / lo;
  Outcome o;
  o.pass = rel < 0.10;
  o.detail = "CD K=5 " + fmt("%.5f", c5) + ", K=10 " + fmt("%.5f", c10) + ", K=20 " + fmt("%.5f", c20) +
             "; (max-min)/min=" + fmt("%.3f", rel) + " (limit 0.10, res 64)";
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome emc_vs_signed_mc() {
  const auto t0 = Clock::now();
  const std::size_t res = 64;
  const Aabb box{Point3::Constant(-0.5), Point3::Constant(0.5)};
  const OracleField field(FieldOracle::from_shape(kSphere));
  const UdfGrid grid = sample_grid(field, res, box, 1);
  const TriangleMesh edge_mesh = extract_mesh(grid, 5e-4, 1);
  std::vector<double> sdf(grid.vertex_count());
  for (std::size_t v = 0; v < sdf.size(); ++v) sdf[v] = analytic_sdf(kSphere, grid.position(v));
  const TriangleMesh smc = signed_marching_cubes(grid, sdf);
  const double secs = seconds_since(t0);
  const double cell = grid.cell_size().x();
  const double cd = chamfer_distance(sample_mesh_surface(edge_mesh, kEvalSamples, 3),
                                     sample_mesh_surface(smc, kEvalSamples, 4));
  const MeshStats se = mesh_diagnostics(edge_mesh), ss = mesh_diagnostics(smc);
  Outcome o;
  o.pass = cd < 0.25 * cell && se.euler == 2 && ss.euler == 2 && se.boundary_edges == 0 &&
           ss.boundary_edges == 0 && secs < 60.0;
  o.detail = "CD=" + fmt("%.3f", cd / cell) + " cells (limit 0.25); chi edge-based " + std::to_string(se.euler) +
             ", MC " + std::to_string(ss.euler) + "; boundary edges " + std::to_string(se.boundary_edges) +
             "/" + std::to_string(ss.boundary_edges) + "; " + fmt("%.1f", secs) + " s (limit 60)";
  return o;
}

// 6 -------------------------------------------------------------------------
Outcome open_surface() {
  const DiskShape disk{Point3::Zero(), Vec3::UnitZ(), 0.4};
  const PointCloud input = sample_shape_surface(disk, kInputPoints, 5).points;
  PipelineConfig c;
  c.resolution = 64;
  c.threads = 1;
  const PipelineResult r = reconstruct(input, c);
  const double cell = r.field.grid.cell_size().x() / r.field.normalization.scale;
  const MeshStats st = mesh_diagnostics(r.mesh);
  double off_plane = 0.0;
  for (const auto& v : r.mesh.vertices) off_plane = std::max(off_plane, std::abs(v.z()));
  const double cd = r.mesh.empty() ? INFINITY : mesh_vs_shape_cd(r.mesh, disk);
  Outcome o;
  o.pass = st.boundary_edges > 0 && st.components.size() == 1 && cd < 2.0 * cell && off_plane <= 2.0 * cell;
  o.detail = "boundary edges " + std::to_string(st.boundary_edges) + ", components " +
             std::to_string(st.components.size()) + ", CD=" + fmt("%.3f", cd / cell) +
             " cells (limit 2), max |z|=" + fmt("%.3f", off_plane / cell) + " cells (limit 2)";
  return o;
}

// 7 -------------------------------------------------------------------------
Outcome resolution_monotonicity() {
  const double c32 = sphere_cd(32, 10), c64 = sphere_cd(64, 10), c128 = sphere_cd(128, 10);
  Outcome o;
  o.pass = c32 > c64 && c64 > c128;
  o.detail = "CD res 32 " + fmt("%.6f", c32) + ", 64 " + fmt("%.6f", c64) + ", 128 " + fmt("%.6f", c128) +
             "; mean |udf| of mesh samples " + fmt("%.2e", sphere_surface_error(32)) + ", " +
             fmt("%.2e", sphere_surface_error(64)) + ", " + fmt("%.2e", sphere_surface_error(128));
  return o;
}

// 8 -------------------------------------------------------------------------
CubeMatch exhaustive_match(std::uint32_t pattern) {
  CubeMatch best{0, 1000};
  int best_tris = 1000;
  for (unsigned occ = 0; occ < 256; ++occ) {
    unsigned cost = 0;
    for (std::size_t p = 0; p < kCubePairs.size(); ++p) {
      const auto [i, j] = kCubePairs[p];
      const unsigned differs = ((occ >> i) ^ (occ >> j)) & 1u;
      cost += ((pattern >> p) & 1u) ^ differs;
    }
    const int tris = mc::triangle_count(occ);
    if (cost < best.cost || (cost == best.cost && (tris < best_tris || (tris == best_tris && occ < best.occupancy)))) {
      best = CubeMatch{static_cast<std::uint8_t>(occ), cost};
      best_tris = tris;
    }
  }
  return best;
}

Outcome xor_matching() {
  std::mt19937_64 rng(10);
  std::size_t mismatches = 0, checked = 0;
  auto check = [&](std::uint32_t pattern) {
    const CubeMatch a = match_cube_configuration(pattern), b = exhaustive_match(pattern);
    if (a.occupancy != b.occupancy || a.cost != b.cost) ++mismatches;
    ++checked;
  };
  for (int i = 0; i < 10000; ++i) check(static_cast<std::uint32_t>(rng() & ((1u << 28) - 1)));
  std::size_t nonzero = 0;
  for (unsigned occ = 0; occ < 256; ++occ) {
    const std::uint32_t pattern = consistent_pattern(static_cast<std::uint8_t>(occ));
    check(pattern);
    if (match_cube_configuration(pattern).cost != 0) ++nonzero;
  }
  Outcome o;
  o.pass = mismatches == 0 && nonzero == 0;
  o.detail = std::to_string(checked) + " patterns, " + std::to_string(mismatches) +
             " mismatches vs exhaustive; consistent patterns with non-zero cost: " + std::to_string(nonzero);
  return o;
}

// 9 -------------------------------------------------------------------------
struct ParaboloidFit {
  std::size_t samples = 0;
  double worst_dist = 0.0;
  double worst_angle = 0.0;
};

// Inputs on z = a (x^2 + y^2) inside a disk of the given radius around the apex.
ParaboloidFit fit_paraboloid(double a, double radius) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < kInputPoints; ++i) {
    const double r = radius * std::sqrt(unit(rng)), t = 2.0 * M_PI * unit(rng);
    const double x = r * std::cos(t), y = r * std::sin(t);
    pts.emplace_back(x, y, a * (x * x + y * y));
  }
  const UpsampleResult r = upsample(PointCloud(pts), PatchParams{});
  ParaboloidFit f;
  f.samples = r.dense.size();
  for (std::size_t i = 0; i < r.dense.size(); ++i) {
    const Point3& p = r.dense.points[i];
    // Vertical offset bounds the distance to the graph from above.
    f.worst_dist = std::max(f.worst_dist, std::abs(p.z() - a * (p.x() * p.x() + p.y() * p.y())));
    const Vec3 n = Vec3(-2.0 * a * p.x(), -2.0 * a * p.y(), 1.0).normalized();
    f.worst_angle = std::max(f.worst_angle, std::min(angle_deg(r.dense.normals[i], n),
                                                     angle_deg(-r.dense.normals[i], n)));
  }
  return f;
}

Outcome quadratic_fit_exactness() {
  const ParaboloidFit apex = fit_paraboloid(1.0, 0.05);
  const ParaboloidFit wide = fit_paraboloid(1.0, 0.5);
  Outcome o;
  o.pass = apex.worst_dist < 1e-6 && apex.worst_angle < 0.1;
  o.detail = "z = x^2+y^2 within r 0.05 of the apex, " + std::to_string(apex.samples) + " samples: max offset " +
             fmt("%.3e", apex.worst_dist) + " (limit 1e-6), max normal error " + fmt("%.4f", apex.worst_angle) +
             " deg (limit 0.1); for reference r 0.5: " + fmt("%.3e", wide.worst_dist) + ", " +
             fmt("%.4f", wide.worst_angle) + " deg";
  return o;
}

// 10 ------------------------------------------------------------------------
Outcome finite_difference_consistency() {
  const OrientedPointCloud& dense = dense_set().sphere;
  const DistanceField field(dense, FieldParams{});
  double spacing = 0.0;
  for (std::size_t i = 0; i < dense.size(); ++i) spacing += field.index().knn(dense.points[i], 2)[1].distance;
  spacing /= static_cast<double>(dense.size());
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  double angle_sum = 0.0;
  std::size_t used = 0, attempts = 0;
  while (used < 1000 && attempts < 1000000) {
    ++attempts;
    // Draw near the sphere so the band is hit often.
    Vec3 dir(unit(rng), unit(rng), unit(rng));
    if (dir.norm() < 1e-3) continue;
    dir.normalize();
    const Point3 q = (kSphere.radius + 12.0 * spacing * 2.0 * unit(rng)) * dir;
    const FieldSample s = field.sample(q);
    if (!(s.phi > 2.0 * spacing && s.phi < 10.0 * spacing) || s.ambiguous) continue;
    const auto fd = finite_difference_gradient(field, q, 1e-4);
    if (!fd) continue;
    angle_sum += angle_deg(*fd, s.grad);
    ++used;
  }
  const double mean = used ? angle_sum / static_cast<double>(used) : 180.0;
  Outcome o;
  o.pass = used >= 1000 && mean < 10.0;
  o.detail = std::to_string(used) + " queries, mean dense spacing " + fmt("%.4g", spacing) + ", mean angle " +
             fmt("%.3f", mean) + " deg (limit 10, h 1e-4)";
  return o;
}

// 11 ------------------------------------------------------------------------
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome pipeline_determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "udfmesh_acceptance";
  std::filesystem::create_directories(dir);
  const auto cloud = (dir / "sphere.xyz").string();
  write_point_cloud(cloud, sphere_input().points());
  std::ostringstream sink;
  auto run = [&](const std::string& threads, const std::string& out) {
    return cli_main({"udfmesh", "reconstruct", "--in", cloud, "--out", out, "--res", "64", "--threads", threads},
                    sink, sink);
  };
  const auto m1 = (dir / "t1.ply").string(), m8 = (dir / "t8.ply").string();
  const int rc1 = run("1", m1), rc8 = run("8", m8);
  const std::string a = slurp(m1), b = slurp(m8);
  Outcome o;
  o.pass = rc1 == 0 && rc8 == 0 && !a.empty() && a == b;
  o.detail = "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc8) + ", " + std::to_string(a.size()) +
             " vs " + std::to_string(b.size()) + " bytes, " + (a == b ? "identical" : "DIFFERENT");
  return o;
}

// 12 ------------------------------------------------------------------------
Outcome metrics_self_tests() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) failures.emplace_back(what);
  };
  const PointCloud a({Point3(0, 0, 0), Point3(1, 2, 3), Point3(-1, 0.5, 2)});
  expect(chamfer_distance(a, a) == 0.0, "CD(A,A)=0");
  expect(chamfer_distance(PointCloud({Point3(0, 0, 0)}), PointCloud({Point3(1, 0, 0)})) == 1.0, "CD unit pair");

  const double eps = 0.01;
  const FScore same = f_score(a, a, eps);
  expect(same.f == 1.0 && same.precision == 1.0 && same.recall == 1.0, "F(A,A)=1");
  const FScore apart = f_score(PointCloud({Point3(0, 0, 0)}), PointCloud({Point3(1, 0, 0)}), eps);
  expect(apart.f == 0.0 && apart.precision == 0.0 && apart.recall == 0.0, "F disjoint=0");
  std::vector<Point3> b;
  for (int i = 0; i < 999; ++i) b.emplace_back(i * 1.0, 0.0, 0.0);
  std::vector<Point3> with_outlier = b;
  with_outlier.emplace_back(0.0, 10.0 * eps, 0.0);
  const FScore out = f_score(PointCloud(with_outlier), PointCloud(b), eps);
  expect(out.precision == 1.0 && out.recall == 999.0 / 1000.0 && out.f == 2.0 * 0.999 / 1.999, "F outlier");

  expect(gradient_cosine_error(Vec3::UnitX(), Vec3::UnitX()) == 0.0, "cos same");
  expect(gradient_cosine_error(Vec3::UnitX(), -Vec3::UnitX()) == 2.0, "cos opposite");
  expect(gradient_cosine_error(Vec3::UnitX(), Vec3::UnitY()) == 1.0, "cos orthogonal");

  TriangleMesh tri;
  tri.vertices = {Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0)};
  tri.triangles = {{0, 1, 2}};
  const MeshStats s1 = mesh_diagnostics(tri);
  expect(s1.boundary_edges == 3 && s1.euler == 1, "single triangle");
  TriangleMesh tet;
  tet.vertices = {Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)};
  tet.triangles = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  const MeshStats s2 = mesh_diagnostics(tet);
  expect(s2.boundary_edges == 0 && s2.euler == 2, "tetrahedron");
  TriangleMesh two = tri;
  two.vertices.push_back(Point3(5, 0, 0));
  two.vertices.push_back(Point3(6, 0, 0));
  two.vertices.push_back(Point3(5, 1, 0));
  two.triangles.push_back({3, 4, 5});
  const MeshStats s3 = mesh_diagnostics(two);
  expect(s3.components.size() == 2 && s3.boundary_edges == 6, "two triangles");

  Outcome o;
  o.pass = failures.empty();
  o.detail = failures.empty() ? "13 exact cases" : "failed:";
  for (const auto& f : failures) o.detail += " [" + f + "]";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"planar exactness", planar_exactness},
      {"P2T beats P2P", p2t_beats_p2p},
      {"gradient decoupling and accuracy", gradient_decoupling},
      {"K-robustness", k_robustness},
      {"edge-based vs signed MC", emc_vs_signed_mc},
      {"open surface", open_surface},
      {"resolution monotonicity", resolution_monotonicity},
      {"XOR matching", xor_matching},
      {"quadratic-fit exactness", quadratic_fit_exactness},
      {"finite-difference consistency", finite_difference_consistency},
      {"pipeline determinism", pipeline_determinism},
      {"metrics self-tests", metrics_self_tests},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
