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

#include "udfmesh/patches.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "udfmesh/errors.hpp"
#include "udfmesh/parallel.hpp"

namespace udfmesh {
namespace {

constexpr std::size_t kSpacingNeighbors = 4;
constexpr double kRankTolerance = 1e-12;

struct LocalFrame {
  std::vector<Neighbor> neighbors;
  Eigen::Matrix3d frame;
  double radius;  // distance to the farthest fitting neighbor
  double scale;   // world length per unit of u
};

LocalFrame local_frame(const PointCloud& cloud, const KdTree& index, std::size_t i,
                       const PatchParams& params) {
  LocalFrame lf;
  lf.neighbors = index.knn(cloud[i], params.k_fit);
  lf.radius = lf.neighbors.back().distance;

  Point3 mean = Point3::Zero();
  for (const auto& nb : lf.neighbors) mean += cloud[nb.id];
  mean /= static_cast<double>(lf.neighbors.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& nb : lf.neighbors) {
    const Vec3 d = cloud[nb.id] - mean;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d ev = eig.eigenvalues();  // ascending
  if (!(ev[2] > 0.0) || ev[1] <= kRankTolerance * ev[2]) throw DegenerateNeighborhoodError(i);

  const Vec3 n = eig.eigenvectors().col(0).normalized();
  const Vec3 t1 = eig.eigenvectors().col(2).normalized();
  lf.frame.col(0) = t1;
  lf.frame.col(1) = n.cross(t1).normalized();
  lf.frame.col(2) = n;

  double spacing = 0.0;
  std::size_t count = 0;
  for (const auto& nb : lf.neighbors) {
    if (nb.distance <= 0.0) continue;
    spacing += nb.distance;
    if (++count == kSpacingNeighbors) break;
  }
  if (count == 0) throw DegenerateNeighborhoodError(i);
  spacing /= static_cast<double>(count);
  lf.scale = params.extent * spacing / params.delta;
  return lf;
}

}  // namespace

void PatchParams::validate() const {
  if (upsample_factor < 1) throw InvalidArgument("upsampling factor must be >= 1");
  if (!(delta > 0.0)) throw InvalidArgument("parameter domain bound must be > 0");
  if (k_fit < 6) throw InvalidArgument("k_fit must be >= 6");
  if (!(ridge >= 0.0)) throw InvalidArgument("ridge must be >= 0");
  if (!(extent > 0.0)) throw InvalidArgument("patch extent must be > 0");
}

ParamSamples sample_parameter_domain(std::size_t m, double delta, std::size_t grid_side) {
  if (m < 1) throw InvalidArgument("need at least one parameter sample");
  if (m > grid_side * grid_side) {
    throw InvalidArgument("requested more parameter samples than lattice points");
  }
  ParamSamples out;
  out.uvs.push_back(Vec2::Zero());
  if (m == 1) return out;
  if (grid_side < 2) throw InvalidArgument("FPS lattice needs grid_side >= 2");

  std::vector<Vec2> lattice;
  lattice.reserve(grid_side * grid_side);
  const double step = 2.0 * delta / static_cast<double>(grid_side - 1);
  for (std::size_t r = 0; r < grid_side; ++r) {
    for (std::size_t c = 0; c < grid_side; ++c) {
      // Pin the last lattice line to +delta exactly.
      const double u1 = c + 1 == grid_side ? delta : -delta + step * static_cast<double>(c);
      const double u2 = r + 1 == grid_side ? delta : -delta + step * static_cast<double>(r);
      lattice.emplace_back(u1, u2);
    }
  }
  std::vector<double> min_d2(lattice.size());
  for (std::size_t j = 0; j < lattice.size(); ++j) min_d2[j] = lattice[j].squaredNorm();

  while (out.uvs.size() < m) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < lattice.size(); ++j) {
      if (min_d2[j] > min_d2[best]) best = j;
    }
    const Vec2 pick = lattice[best];
    out.uvs.push_back(pick);
    for (std::size_t j = 0; j < lattice.size(); ++j) {
      min_d2[j] = std::min(min_d2[j], (lattice[j] - pick).squaredNorm());
    }
  }
  return out;
}

QuadraticPatch fit_local_patch(const PointCloud& cloud, const KdTree& index, std::size_t i,
                               const PatchParams& params) {
  if (cloud.size() < params.k_fit) throw InvalidArgument("cloud has fewer points than k_fit");
  const LocalFrame lf = local_frame(cloud, index, i, params);
  const Point3& center = cloud[i];

  // Solve in u normalized by the neighborhood radius so the ridge weight and
  // the rank test do not depend on the cloud's absolute scale.
  const double u_radius = lf.radius / lf.scale;
  const double inv_h2 = 1.0 / (lf.radius * lf.radius);
  Eigen::Matrix<double, 5, 5> gram = Eigen::Matrix<double, 5, 5>::Zero();
  Eigen::Matrix<double, 5, 3> rhs = Eigen::Matrix<double, 5, 3>::Zero();
  std::vector<Eigen::Matrix<double, 5, 1>> rows;
  rows.reserve(lf.neighbors.size());
  for (const auto& nb : lf.neighbors) {
    const Vec3 d = cloud[nb.id] - center;
    const double a = d.dot(lf.frame.col(0)) / lf.scale / u_radius;
    const double b = d.dot(lf.frame.col(1)) / lf.scale / u_radius;
    Eigen::Matrix<double, 5, 1> e;
    e << a, b, a * a, a * b, b * b;
    const double w = std::exp(-d.squaredNorm() * inv_h2);
    gram += w * e * e.transpose();
    rhs += w * e * d.transpose();
    rows.push_back(e);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> eig(gram, Eigen::EigenvaluesOnly);
  const auto ev = eig.eigenvalues();
  if (!(ev[4] > 0.0) || ev[0] <= kRankTolerance * ev[4]) throw DegenerateNeighborhoodError(i);

  gram.diagonal().array() += params.ridge;
  const Eigen::Matrix<double, 5, 3> solution = gram.ldlt().solve(rhs);

  QuadraticPatch patch;
  patch.center = center;
  patch.frame = lf.frame;
  const double s1 = 1.0 / u_radius;
  const double s2 = s1 * s1;
  patch.coeffs.col(0).setZero();
  patch.coeffs.col(1) = solution.row(0).transpose() * s1;
  patch.coeffs.col(2) = solution.row(1).transpose() * s1;
  patch.coeffs.col(3) = solution.row(2).transpose() * s2;
  patch.coeffs.col(4) = solution.row(3).transpose() * s2;
  patch.coeffs.col(5) = solution.row(4).transpose() * s2;
  if (!patch.coeffs.allFinite()) throw DegenerateNeighborhoodError(i);

  double sq = 0.0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const Vec3 d = cloud[lf.neighbors[j].id] - center;
    sq += (d - solution.transpose() * rows[j]).squaredNorm();
  }
  patch.residual_rms = std::sqrt(sq / static_cast<double>(rows.size()));
  return patch;
}

QuadraticPatch fit_linear_patch(const PointCloud& cloud, const KdTree& index, std::size_t i,
                                const PatchParams& params) {
  if (cloud.size() < params.k_fit) throw InvalidArgument("cloud has fewer points than k_fit");
  const LocalFrame lf = local_frame(cloud, index, i, params);
  QuadraticPatch patch;
  patch.center = cloud[i];
  patch.frame = lf.frame;
  patch.coeffs.col(1) = lf.scale * lf.frame.col(0);
  patch.coeffs.col(2) = lf.scale * lf.frame.col(1);
  patch.linear = true;
  double sq = 0.0;
  for (const auto& nb : lf.neighbors) {
    const double h = (cloud[nb.id] - patch.center).dot(lf.frame.col(2));
    sq += h * h;
  }
  patch.residual_rms = std::sqrt(sq / static_cast<double>(lf.neighbors.size()));
  return patch;
}

Point3 evaluate_patch(const QuadraticPatch& patch, const Vec2& u) {
  Eigen::Matrix<double, 6, 1> e;
  e << 1.0, u[0], u[1], u[0] * u[0], u[0] * u[1], u[1] * u[1];
  return patch.center + patch.coeffs * e;
}

Eigen::Matrix<double, 3, 2> patch_jacobian(const QuadraticPatch& patch, const Vec2& u) {
  const auto& a = patch.coeffs;
  Eigen::Matrix<double, 3, 2> j;
  j.col(0) = a.col(1) + 2.0 * u[0] * a.col(3) + u[1] * a.col(4);
  j.col(1) = a.col(2) + u[0] * a.col(4) + 2.0 * u[1] * a.col(5);
  return j;
}

Vec3 patch_normal(const QuadraticPatch& patch, const Vec2& u) {
  const auto j = patch_jacobian(patch, u);
  const Vec3 c = j.col(0).cross(j.col(1));
  const double len = c.norm();
  if (!(len >= 1e-12)) throw DegenerateJacobianError();
  return c / len;
}

UpsampleResult upsample(const PointCloud& cloud, const PatchParams& params, unsigned threads) {
  params.validate();
  if (cloud.size() < params.k_fit) throw InvalidArgument("cloud has fewer points than k_fit");
  const ParamSamples samples =
      sample_parameter_domain(params.upsample_factor, params.delta, params.grid_side);
  const KdTree index(cloud);
  const std::size_t m = samples.size();

  UpsampleResult result;
  auto& dense = result.dense;
  dense.points.resize(cloud.size() * m);
  dense.normals.resize(cloud.size() * m);
  dense.source_index.resize(cloud.size() * m);
  std::atomic<std::size_t> fallbacks{0};

  parallel_for(cloud.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      QuadraticPatch patch;
      try {
        patch = fit_local_patch(cloud, index, i, params);
      } catch (const DegenerateNeighborhoodError&) {
        patch = fit_linear_patch(cloud, index, i, params);
        fallbacks.fetch_add(1, std::memory_order_relaxed);
      }
      for (std::size_t s = 0; s < m; ++s) {
        const std::size_t out = i * m + s;
        dense.points[out] = evaluate_patch(patch, samples.uvs[s]);
        dense.normals[out] = patch_normal(patch, samples.uvs[s]);
        dense.source_index[out] = static_cast<std::uint32_t>(i);
      }
    }
  });
  result.linear_fallbacks = fallbacks.load();
  return result;
}

}  // namespace udfmesh
