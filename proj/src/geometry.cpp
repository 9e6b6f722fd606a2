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

#include "udfmesh/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <string>

#include "udfmesh/errors.hpp"

namespace udfmesh {

bool is_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

Aabb Aabb::of(std::span<const Point3> points) {
  if (points.empty()) throw InvalidArgument("bounding box of an empty point set");
  Aabb box{points.front(), points.front()};
  for (const auto& p : points) {
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box;
}

bool Aabb::contains(const Point3& p, double slack) const {
  return (p.array() >= min.array() - slack).all() && (p.array() <= max.array() + slack).all();
}

PointCloud::PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!is_finite(points_[i])) {
      throw InvalidArgument("non-finite coordinate at point " + std::to_string(i));
    }
  }
  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), 0);
  auto less = [this](std::size_t a, std::size_t b) {
    const auto& p = points_[a];
    const auto& q = points_[b];
    return std::tie(p.x(), p.y(), p.z()) < std::tie(q.x(), q.y(), q.z());
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (points_[order[i]] == points_[order[i - 1]]) ++duplicates_;
  }
}

void OrientedPointCloud::validate() const {
  if (normals.size() != points.size() || source_index.size() != points.size()) {
    throw InvalidArgument("oriented point cloud: array lengths differ");
  }
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (std::abs(normals[i].norm() - 1.0) > 1e-9) {
      throw InvalidArgument("oriented point cloud: normal " + std::to_string(i) + " is not unit");
    }
  }
}

Normalization Normalization::fit(std::span<const Point3> points) {
  const Aabb box = Aabb::of(points);
  Normalization n;
  n.center = box.center();
  const double extent = box.extent().maxCoeff();
  n.scale = extent > 0.0 ? 1.0 / extent : 1.0;
  return n;
}

}  // namespace udfmesh
