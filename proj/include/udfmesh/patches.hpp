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
#include <vector>

#include <Eigen/Core>

#include "udfmesh/geometry.hpp"
#include "udfmesh/kdtree.hpp"

namespace udfmesh {

/// Local quadratic patch f(u) = center + coeffs * [1, u1, u2, u1^2, u1*u2, u2^2]^T.
///
/// `coeffs` maps parameter coordinates straight to world offsets. Column 0 (the
/// constant term) is always zero for fitted patches, so f(0) == center.
struct QuadraticPatch {
  Point3 center = Point3::Zero();
  Eigen::Matrix<double, 3, 6> coeffs = Eigen::Matrix<double, 3, 6>::Zero();
  /// Columns t1, t2, n of the PCA frame used for fitting.
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
  double residual_rms = 0.0;
  bool linear = false;  // true when the fit fell back to the tangent plane
};

struct PatchParams {
  std::size_t upsample_factor = 16;  // M
  double delta = 0.1;                // parameter domain is [-delta, delta]^2
  std::size_t k_fit = 20;
  double ridge = 1e-6;
  std::size_t grid_side = 16;  // FPS source lattice is grid_side x grid_side
  /// Spatial half-width covered by the parameter domain, as a multiple of the
  /// local sample spacing (mean distance to the 4 nearest neighbors).
  double extent = 0.6;

  void validate() const;
};

struct ParamSamples {
  std::vector<Vec2> uvs;
  std::size_t size() const noexcept { return uvs.size(); }
};

/// (0,0) followed by m-1 farthest-point picks from a uniform grid_side^2
/// lattice over [-delta, delta]^2. Lattice points are scanned row-major (u1
/// fastest) and the first maximal candidate wins.
ParamSamples sample_parameter_domain(std::size_t m, double delta, std::size_t grid_side);

/// Weighted ridge least-squares fit of the patch around point `i` in the
/// PCA tangent frame of its k_fit neighborhood.
/// Throws DegenerateNeighborhoodError when the neighborhood is collinear or
/// the quadratic design is rank-deficient.
QuadraticPatch fit_local_patch(const PointCloud& cloud, const KdTree& index, std::size_t i,
                               const PatchParams& params);

/// Tangent-plane patch from the PCA frame alone; the fallback for
/// neighborhoods that cannot support a quadratic.
QuadraticPatch fit_linear_patch(const PointCloud& cloud, const KdTree& index, std::size_t i,
                                const PatchParams& params);

Point3 evaluate_patch(const QuadraticPatch& patch, const Vec2& u);

/// Columns df/du1 and df/du2.
Eigen::Matrix<double, 3, 2> patch_jacobian(const QuadraticPatch& patch, const Vec2& u);

/// Unit (unoriented) normal from the Jacobian cross product.
/// Throws DegenerateJacobianError when the cross product norm is < 1e-12.
Vec3 patch_normal(const QuadraticPatch& patch, const Vec2& u);

struct UpsampleResult {
  OrientedPointCloud dense;
  std::size_t linear_fallbacks = 0;
};

/// Densify `cloud` by M samples per input point, ordered point-major.
UpsampleResult upsample(const PointCloud& cloud, const PatchParams& params, unsigned threads = 1);

}  // namespace udfmesh
