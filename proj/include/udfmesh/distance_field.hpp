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
#include <memory>
#include <vector>

#include "udfmesh/field.hpp"
#include "udfmesh/geometry.hpp"
#include "udfmesh/kdtree.hpp"

namespace udfmesh {

enum class WeightKind { Uniform, InverseDistance, Gaussian };

/// Deterministic neighbor weighting kernel. Gaussian uses the distance to the
/// farthest neighbor in the frame as bandwidth.
struct WeightScheme {
  WeightKind kind = WeightKind::Gaussian;
  double power = 2.0;  // InverseDistance only

  static WeightScheme uniform() { return {WeightKind::Uniform, 0.0}; }
  static WeightScheme inverse_distance(double p = 2.0) { return {WeightKind::InverseDistance, p}; }
  static WeightScheme gaussian() { return {WeightKind::Gaussian, 0.0}; }
};

/// One neighbor of a query q as seen from q.
struct NeighborEntry {
  std::uint32_t id;
  Point3 point;
  Vec3 offset;   // q - point
  Vec3 normal;   // unoriented
  Vec3 aligned;  // normal flipped to face q
  double distance;
  std::uint32_t source;  // input point whose patch produced this sample
};

/// The K nearest dense samples of a query, sorted by (distance, id).
struct NeighborFrame {
  Point3 query = Point3::Zero();
  std::vector<NeighborEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
};

enum class ValueEstimator { PointToTangent, PointToPoint };

struct FieldParams {
  std::size_t k = 10;
  WeightScheme value_weights = WeightScheme::gaussian();
  WeightScheme gradient_weights = WeightScheme::gaussian();
  ValueEstimator estimator = ValueEstimator::PointToTangent;
};

/// sgn(<n, q - p>) * n, with sgn(0) = +1.
Vec3 align_normal(const Vec3& n, const Point3& p, const Point3& q);

/// Normalized weights (sum 1) for the entries of `frame`. Any neighbor closer
/// than 1e-12 takes the whole weight (the first such one, if several).
std::vector<double> compute_weights(const WeightScheme& scheme, const NeighborFrame& frame);

/// Unsigned distance field estimated from a dense oriented cloud. Immutable;
/// concurrent queries are safe.
class DistanceField final : public UdfSource {
 public:
  /// Throws InvalidArgument if the cloud is invalid or has fewer than K points.
  explicit DistanceField(OrientedPointCloud dense, FieldParams params = {});

  const OrientedPointCloud& cloud() const noexcept { return dense_; }
  const KdTree& index() const noexcept { return *index_; }
  const FieldParams& params() const noexcept { return params_; }

  NeighborFrame neighbor_frame(const Point3& q) const;

  /// Value from the configured estimator; gradient with nearest-sheet fallback.
  /// Gradients that stay ambiguous come back flagged.
  FieldSample sample(const Point3& q) const override;
  double value(const Point3& q) const override;

 private:
  OrientedPointCloud dense_;
  FieldParams params_;
  std::shared_ptr<const KdTree> index_;
};

struct P2tResult {
  double phi;
  NeighborFrame frame;
};

/// Weighted point-to-tangent-plane distance.
P2tResult udf_p2t(const Point3& q, const DistanceField& field);
/// Weighted point-to-point distance (ablation baseline).
double udf_p2p(const Point3& q, const DistanceField& field);

/// Normalized weighted sum of aligned normals using the gradient weights.
/// Throws AmbiguousGradientError when the sum is shorter than 1e-9.
Vec3 udf_gradient(const Point3& q, const DistanceField& field, const NeighborFrame& frame);

/// Retry of udf_gradient restricted to neighbors produced by the same input
/// point as the nearest neighbor. Throws AmbiguousGradientError if that also
/// cancels.
Vec3 udf_gradient_nearest_sheet(const DistanceField& field, const NeighborFrame& frame);

}  // namespace udfmesh
