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

#include "udfmesh/kdtree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "udfmesh/errors.hpp"
#include "udfmesh/simd.hpp"

namespace udfmesh {
namespace {

struct Candidate {
  double d2;
  std::uint32_t id;
  bool operator<(const Candidate& o) const { return d2 < o.d2 || (d2 == o.d2 && id < o.id); }
};

// Bounded sorted list; k is small (<= a few dozen) in every caller.
class BestList {
 public:
  explicit BestList(std::size_t k) : k_(k) { items_.reserve(k + 1); }

  bool full() const { return items_.size() == k_; }
  double worst_d2() const {
    return full() ? items_.back().d2 : std::numeric_limits<double>::infinity();
  }
  void offer(const Candidate& c) {
    if (full() && !(c < items_.back())) return;
    auto pos = std::upper_bound(items_.begin(), items_.end(), c);
    items_.insert(pos, c);
    if (items_.size() > k_) items_.pop_back();
  }
  const std::vector<Candidate>& items() const { return items_; }

 private:
  std::size_t k_;
  std::vector<Candidate> items_;
};

}  // namespace

KdTree::KdTree(std::span<const Point3> points) {
  if (points.empty()) throw InvalidArgument("cannot build a spatial index over an empty cloud");
  ids_.resize(points.size());
  std::iota(ids_.begin(), ids_.end(), 0u);
  nodes_.reserve(2 * points.size() / kLeafSize + 1);
  build(0, static_cast<std::uint32_t>(points.size()), points);
  xs_.resize(ids_.size());
  ys_.resize(ids_.size());
  zs_.resize(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const Point3& p = points[ids_[i]];
    xs_[i] = p.x();
    ys_[i] = p.y();
    zs_[i] = p.z();
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end, std::span<const Point3> points) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{0.0, begin, end, -1, -1, -1});
  if (end - begin <= kLeafSize) return index;

  Point3 lo = points[ids_[begin]];
  Point3 hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points[ids_[i]]);
    hi = hi.cwiseMax(points[ids_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (hi[axis] == lo[axis]) return index;  // all coincident: keep as one leaf

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(ids_.begin() + begin, ids_.begin() + mid, ids_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = points[a][axis];
                     const double cb = points[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split = points[ids_[mid]][axis];
  const std::int32_t left = build(begin, mid, points);
  const std::int32_t right = build(mid, end, points);
  Node& node = nodes_[index];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return index;
}

void KdTree::knn(const Point3& q, std::size_t k, std::vector<Neighbor>& out) const {
  if (k == 0) throw InvalidArgument("knn query requires k >= 1");
  k = std::min(k, ids_.size());
  BestList best(k);
  const auto& kern = simd::kernels();
  const double qa[3] = {q.x(), q.y(), q.z()};
  std::array<double, kLeafSize> d2{};

  std::array<std::int32_t, 128> stack{};
  std::size_t top = 0;
  // Far children are pushed with the squared plane distance needed to visit them.
  std::array<double, 128> bound{};
  stack[top] = 0;
  bound[top++] = 0.0;
  while (top > 0) {
    --top;
    const std::int32_t ni = stack[top];
    const double node_bound = bound[top];
    if (node_bound > best.worst_d2()) continue;
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
      const std::uint32_t count = node.end - node.begin;
      for (std::uint32_t off = 0; off < count; off += kLeafSize) {
        const std::uint32_t m = std::min<std::uint32_t>(kLeafSize, count - off);
        const std::uint32_t b = node.begin + off;
        kern.squared_distances(&xs_[b], &ys_[b], &zs_[b], m, qa, d2.data());
        for (std::uint32_t j = 0; j < m; ++j) best.offer(Candidate{d2[j], ids_[b + j]});
      }
      continue;
    }
    const double diff = qa[node.axis] - node.split;
    const std::int32_t near_child = diff <= 0.0 ? node.left : node.right;
    const std::int32_t far_child = diff <= 0.0 ? node.right : node.left;
    // Points equal to the split value may sit on either side, so the far
    // side is visited whenever its plane distance does not exceed the bound.
    stack[top] = far_child;
    bound[top++] = std::max(node_bound, diff * diff);
    stack[top] = near_child;
    bound[top++] = node_bound;
  }

  out.clear();
  for (const auto& c : best.items()) out.push_back(Neighbor{c.id, std::sqrt(c.d2)});
}

std::vector<Neighbor> KdTree::knn(const Point3& q, std::size_t k) const {
  std::vector<Neighbor> out;
  knn(q, k, out);
  return out;
}

Neighbor KdTree::nearest(const Point3& q) const {
  std::vector<Neighbor> out;
  knn(q, 1, out);
  return out.front();
}

}  // namespace udfmesh
