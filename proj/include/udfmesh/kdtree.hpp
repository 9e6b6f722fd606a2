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
#include <span>
#include <vector>

#include "udfmesh/geometry.hpp"

namespace udfmesh {

struct Neighbor {
  std::uint32_t id;
  double distance;
};

/// Exact k-nearest-neighbor index over a fixed point set.
///
/// Results are sorted by (distance, id): equidistant points come back in
/// ascending id order, so every consumer is bitwise deterministic. The tree is
/// immutable after construction and safe for concurrent queries.
class KdTree {
 public:
  static constexpr std::size_t kLeafSize = 16;

  /// Throws InvalidArgument on an empty point set.
  explicit KdTree(std::span<const Point3> points);
  explicit KdTree(const PointCloud& cloud) : KdTree(std::span<const Point3>(cloud.points())) {}

  std::size_t size() const noexcept { return ids_.size(); }

  /// min(k, size()) neighbors of q; k must be >= 1.
  std::vector<Neighbor> knn(const Point3& q, std::size_t k) const;
  /// Same as knn but reuses `out` to avoid allocation in hot loops.
  void knn(const Point3& q, std::size_t k, std::vector<Neighbor>& out) const;
  Neighbor nearest(const Point3& q) const;

 private:
  struct Node {
    double split = 0.0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    int axis = -1;  // -1 marks a leaf
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::span<const Point3> points);

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> ids_;
  // Coordinates in tree order, structure-of-arrays for the SIMD leaf scan.
  std::vector<double> xs_, ys_, zs_;
};

}  // namespace udfmesh
