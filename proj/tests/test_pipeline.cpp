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

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "udfmesh/errors.hpp"
#include "udfmesh/geometry.hpp"
#include "udfmesh/metrics.hpp"
#include "udfmesh/oracles.hpp"
#include "udfmesh/parallel.hpp"
#include "udfmesh/pipeline.hpp"

using namespace udfmesh;

TEST_CASE("bounding boxes and normalization") {
  std::vector<Point3> pts{Point3(1, 2, 3), Point3(-1, 0, 5), Point3(0, 4, 4)};
  const Aabb box = Aabb::of(pts);
  CHECK(box.min == Point3(-1, 0, 3));
  CHECK(box.max == Point3(1, 4, 5));
  CHECK(box.contains(Point3(0, 0, 3)));
  CHECK_FALSE(box.contains(Point3(0, -0.1, 3)));
  CHECK(box.contains(Point3(0, -0.1, 3), 0.2));
  CHECK_THROWS_AS(Aabb::of(std::vector<Point3>{}), InvalidArgument);

  const auto n = Normalization::fit(pts);
  CHECK(n.scale == 0.25);
  CHECK(n.center == Point3(0, 2, 4));
  for (const auto& p : pts) {
    CHECK(n.apply(p).cwiseAbs().maxCoeff() <= 0.5);
    CHECK((n.invert(n.apply(p)) - p).norm() < 1e-15);
  }
  const auto single = Normalization::fit(std::vector<Point3>{Point3(1, 1, 1)});
  CHECK(single.scale == 1.0);
}

TEST_CASE("point clouds reject non-finite input and count duplicates") {
  CHECK_THROWS_AS(PointCloud({Point3(0, 0, std::numeric_limits<double>::quiet_NaN())}), InvalidArgument);
  const PointCloud c({Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 0, 0), Point3(0, 0, 0)});
  CHECK(c.duplicate_count() == 2);
}

TEST_CASE("oriented clouds validate their arrays") {
  OrientedPointCloud c;
  c.points = {Point3(0, 0, 0)};
  c.normals = {Vec3(0, 0, 1)};
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.source_index = {0};
  CHECK_NOTHROW(c.validate());
  c.normals[0] = Vec3(0, 0, 0.5);
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("parallel_for covers the range once and forwards errors") {
  for (unsigned threads : {0u, 1u, 3u, 16u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) hits[i]++;
    });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  parallel_for(0, 4, [](std::size_t, std::size_t) { FAIL("called on an empty range"); });
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t b, std::size_t) {
                                 if (b > 0) throw std::runtime_error("worker");
                               }),
                  std::runtime_error);
}

TEST_CASE("pipeline configuration") {
  PipelineConfig c;
  CHECK(c.patch.upsample_factor == 16);
  CHECK(c.patch.delta == 0.1);
  CHECK(c.field.k == 10);
  CHECK(c.tau == 5e-4);
  CHECK(c.resolution == 128);
  CHECK_NOTHROW(c.validate());
  c.resolution = 4;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.tau = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = {};
  c.field.k = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("reconstruction is invariant to translation and scale of the input") {
  const auto s = sample_shape_surface(SphereShape{Point3::Zero(), 0.4}, 1500, 31);
  PipelineConfig config;
  config.resolution = 32;
  config.threads = 1;
  const auto base = reconstruct(s.points, config);
  REQUIRE_FALSE(base.mesh.empty());

  std::vector<Point3> moved;
  const Vec3 shift(10, -3, 2);
  for (const auto& p : s.points.points()) moved.push_back(5.0 * p + shift);
  const auto other = reconstruct(PointCloud(moved), config);
  REQUIRE(other.mesh.vertices.size() == base.mesh.vertices.size());
  CHECK(other.mesh.triangles == base.mesh.triangles);
  double worst = 0.0;
  for (std::size_t i = 0; i < base.mesh.vertices.size(); ++i) {
    worst = std::max(worst, (other.mesh.vertices[i] - (5.0 * base.mesh.vertices[i] + shift)).norm());
  }
  CHECK(worst < 1e-3);  // f32 grid storage, relative to a 0.16 cell

  const auto stats = mesh_diagnostics(base.mesh);
  CHECK(stats.components.size() >= 1);
  double err = 0.0;
  for (const auto& v : base.mesh.vertices) err = std::max(err, std::abs(v.norm() - 0.4));
  CHECK(err < 0.9 / 28);
}

TEST_CASE("normalization can be disabled") {
  const auto s = sample_shape_surface(SphereShape{Point3::Zero(), 0.4}, 800, 32);
  PipelineConfig config;
  config.normalize = false;
  const auto n = choose_normalization(s.points, config);
  CHECK(n.scale == 1.0);
  CHECK(n.center == Vec3::Zero());
  config.normalize = true;
  CHECK(choose_normalization(s.points, config).scale > 1.0);
}

TEST_CASE("too few points") {
  PipelineConfig config;
  std::vector<Point3> pts(10, Point3::Zero());
  for (int i = 0; i < 10; ++i) pts[i] = Point3(i, i * i, 0);
  CHECK_THROWS_AS(reconstruct(PointCloud(pts), config), InvalidArgument);
}
