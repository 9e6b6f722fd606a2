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

#include "udfmesh/distance_field.hpp"

#include <algorithm>
#include <cmath>

#include "udfmesh/errors.hpp"

namespace udfmesh {
namespace {

constexpr double kCoincident = 1e-12;
constexpr double kInverseDistanceEps = 1e-12;
constexpr double kAmbiguousNorm = 1e-9;

Vec3 weighted_normal_sum(const NeighborFrame& frame, const std::vector<double>& w) {
  Vec3 sum = Vec3::Zero();
  for (std::size_t k = 0; k < frame.size(); ++k) sum += w[k] * frame.entries[k].aligned;
  return sum;
}

}  // namespace

Vec3 align_normal(const Vec3& n, const Point3& p, const Point3& q) {
  return n.dot(q - p) < 0.0 ? Vec3(-n) : n;
}

std::vector<double> compute_weights(const WeightScheme& scheme, const NeighborFrame& frame) {
  const std::size_t k = frame.size();
  if (k == 0) throw InvalidArgument("cannot weight an empty neighborhood");
  std::vector<double> w(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (frame.entries[i].distance < kCoincident) {
      w[i] = 1.0;
      return w;
    }
  }
  switch (scheme.kind) {
    case WeightKind::Uniform:
      std::fill(w.begin(), w.end(), 1.0);
      break;
    case WeightKind::InverseDistance:
      for (std::size_t i = 0; i < k; ++i) {
        w[i] = std::pow(frame.entries[i].distance + kInverseDistanceEps, -scheme.power);
      }
      break;
    case WeightKind::Gaussian: {
      double far = 0.0;
      for (const auto& e : frame.entries) far = std::max(far, e.distance);
      const double inv_h2 = 1.0 / (far * far);
      for (std::size_t i = 0; i < k; ++i) {
        const double d = frame.entries[i].distance;
        w[i] = std::exp(-d * d * inv_h2);
      }
      break;
    }
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return w;
}

DistanceField::DistanceField(OrientedPointCloud dense, FieldParams params)
    : dense_(std::move(dense)), params_(params) {
  dense_.validate();
  if (params_.k < 1) throw InvalidArgument("neighborhood size K must be >= 1");
  if (dense_.size() < params_.k) throw InvalidArgument("dense cloud has fewer points than K");
  index_ = std::make_shared<const KdTree>(std::span<const Point3>(dense_.points));
}

NeighborFrame DistanceField::neighbor_frame(const Point3& q) const {
  thread_local std::vector<Neighbor> knn;
  index_->knn(q, params_.k, knn);
  NeighborFrame frame;
  frame.query = q;
  frame.entries.reserve(knn.size());
  for (const auto& nb : knn) {
    NeighborEntry e;
    e.id = nb.id;
    e.point = dense_.points[nb.id];
    e.offset = q - e.point;
    e.normal = dense_.normals[nb.id];
    e.aligned = align_normal(e.normal, e.point, q);
    e.distance = nb.distance;
    e.source = dense_.source_index[nb.id];
    frame.entries.push_back(e);
  }
  return frame;
}

P2tResult udf_p2t(const Point3& q, const DistanceField& field) {
  P2tResult out{0.0, field.neighbor_frame(q)};
  const auto w = compute_weights(field.params().value_weights, out.frame);
  for (std::size_t k = 0; k < out.frame.size(); ++k) {
    const auto& e = out.frame.entries[k];
    out.phi += w[k] * e.aligned.dot(e.offset);
  }
  return out;
}

double udf_p2p(const Point3& q, const DistanceField& field) {
  const NeighborFrame frame = field.neighbor_frame(q);
  const auto w = compute_weights(field.params().value_weights, frame);
  double phi = 0.0;
  for (std::size_t k = 0; k < frame.size(); ++k) phi += w[k] * frame.entries[k].distance;
  return phi;
}

Vec3 udf_gradient(const Point3& /*q*/, const DistanceField& field, const NeighborFrame& frame) {
  const auto w = compute_weights(field.params().gradient_weights, frame);
  const Vec3 sum = weighted_normal_sum(frame, w);
  const double len = sum.norm();
  if (!(len >= kAmbiguousNorm)) throw AmbiguousGradientError();
  return sum / len;
}

Vec3 udf_gradient_nearest_sheet(const DistanceField& field, const NeighborFrame& frame) {
  if (frame.size() == 0) throw AmbiguousGradientError();
  NeighborFrame sheet;
  sheet.query = frame.query;
  const std::uint32_t source = frame.entries.front().source;
  for (const auto& e : frame.entries) {
    if (e.source == source) sheet.entries.push_back(e);
  }
  const auto w = compute_weights(field.params().gradient_weights, sheet);
  const Vec3 sum = weighted_normal_sum(sheet, w);
  const double len = sum.norm();
  if (!(len >= kAmbiguousNorm)) throw AmbiguousGradientError();
  return sum / len;
}

double DistanceField::value(const Point3& q) const {
  if (params_.estimator == ValueEstimator::PointToPoint) return udf_p2p(q, *this);
  return udf_p2t(q, *this).phi;
}

FieldSample DistanceField::sample(const Point3& q) const {
  FieldSample s;
  NeighborFrame frame = neighbor_frame(q);
  const auto w = compute_weights(params_.value_weights, frame);
  for (std::size_t k = 0; k < frame.size(); ++k) {
    const auto& e = frame.entries[k];
    s.phi += w[k] * (params_.estimator == ValueEstimator::PointToPoint ? e.distance
                                                                         : e.aligned.dot(e.offset));
  }
  try {
    s.grad = udf_gradient(q, *this, frame);
  } catch (const AmbiguousGradientError&) {
    try {
      s.grad = udf_gradient_nearest_sheet(*this, frame);
    } catch (const AmbiguousGradientError&) {
      s.grad.setZero();
      s.ambiguous = true;
    }
  }
  return s;
}

}  // namespace udfmesh
