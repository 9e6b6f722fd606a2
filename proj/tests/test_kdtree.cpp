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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "udfmesh/errors.hpp"
#include "udfmesh/kdtree.hpp"

using namespace udfmesh;

namespace {

// Ranks by squared distance, then id; distances reported as square roots.
std::vector<Neighbor> brute_knn(const std::vector<Point3>& pts, const Point3& q, std::size_t k) {
  std::vector<std::pair<double, std::uint32_t>> all;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double dx = pts[i].x() - q.x(), dy = pts[i].y() - q.y(), dz = pts[i].z() - q.z();
    all.emplace_back(dx * dx + dy * dy + dz * dz, static_cast<std::uint32_t>(i));
  }
  std::sort(all.begin(), all.end());
  all.resize(std::min(k, all.size()));
  std::vector<Neighbor> out;
  for (const auto& [d2, id] : all) out.push_back({id, std::sqrt(d2)});
  return out;
}

}  // namespace

TEST_CASE("empty cloud is rejected") {
  std::vector<Point3> none;
  CHECK_THROWS_AS(KdTree{std::span<const Point3>(none)}, InvalidArgument);
}

TEST_CASE("small examples") {
  std::vector<Point3> one{Point3(0.3, -1.0, 2.0)};
  KdTree single{std::span<const Point3>(one)};
  CHECK(single.nearest(Point3(5, 5, 5)).id == 0);

  std::vector<Point3> two{Point3(0, 0, 0), Point3(1, 0, 0)};
  KdTree pair{std::span<const Point3>(two)};
  CHECK(pair.knn(Point3(0.1, 0, 0), 1)[0].id == 0);
  // tie goes to the lower id
  CHECK(pair.knn(Point3(0.5, 0, 0), 1)[0].id == 0);

  std::vector<Point3> three{Point3(0, 0, 0), Point3(2, 0, 0), Point3(3, 0, 0)};
  KdTree line{std::span<const Point3>(three)};
  const auto nn = line.knn(Point3(1.4, 0, 0), 2);
  REQUIRE(nn.size() == 2);
  CHECK(nn[0].id == 1);
  CHECK(nn[1].id == 0);
  CHECK(nn[0].distance == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(nn[1].distance == doctest::Approx(1.4).epsilon(1e-14));

  const auto self = line.knn(three[2], 1);
  CHECK(self[0].id == 2);
  CHECK(self[0].distance == 0.0);
}

TEST_CASE("k = 0 is rejected") {
  std::vector<Point3> pts{Point3(0, 0, 0)};
  KdTree tree{std::span<const Point3>(pts)};
  CHECK_THROWS_AS(tree.knn(Point3(0, 0, 0), 0), InvalidArgument);
}

TEST_CASE("k larger than the cloud returns every point") {
  std::vector<Point3> pts{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0)};
  KdTree tree{std::span<const Point3>(pts)};
  CHECK(tree.knn(Point3(0, 0, 0), 10).size() == 3);
}

TEST_CASE("matches brute force on random and lattice clouds") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point3> pts;
  for (int i = 0; i < 3000; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
  // lattice points and duplicates produce exact distance ties
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y)
      for (int z = 0; z < 6; ++z) pts.emplace_back(0.2 * x, 0.2 * y, 0.2 * z);
  for (int i = 0; i < 50; ++i) pts.push_back(pts[static_cast<std::size_t>(i) * 7]);

  KdTree tree{std::span<const Point3>(pts)};
  std::vector<Point3> queries;
  for (int i = 0; i < 300; ++i) queries.emplace_back(1.3 * u(rng), 1.3 * u(rng), 1.3 * u(rng));
  for (int i = 0; i < 100; ++i) queries.push_back(pts[static_cast<std::size_t>(i) * 31]);
  queries.emplace_back(0.1, 0.1, 0.1);
  queries.emplace_back(0.5, 0.3, 0.1);

  for (std::size_t k : {1u, 4u, 10u, 33u}) {
    for (const auto& q : queries) {
      const auto got = tree.knn(q, k);
      const auto want = brute_knn(pts, q, k);
      REQUIRE(got.size() == want.size());
      for (std::size_t j = 0; j < got.size(); ++j) {
        CHECK(got[j].id == want[j].id);
        CHECK(got[j].distance == want[j].distance);
      }
    }
  }
}
