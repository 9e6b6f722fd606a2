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

#include <random>
#include <vector>

#include "doctest.h"
#include "udfmesh/extraction.hpp"
#include "udfmesh/kdtree.hpp"
#include "udfmesh/simd.hpp"

using namespace udfmesh;
using simd::Isa;

namespace {

std::vector<Isa> vector_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (simd::isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

struct ForceGuard {
  explicit ForceGuard(Isa isa) { simd::force_isa(isa); }
  ~ForceGuard() { simd::force_isa(default_isa); }
  static inline Isa default_isa = simd::kernels().isa;
};

}  // namespace

TEST_CASE("scalar kernels are always available") {
  CHECK(simd::isa_supported(Isa::Scalar));
  CHECK(simd::kernels_for(Isa::Scalar).isa == Isa::Scalar);
  CHECK(simd::isa_name(Isa::Avx2) == "avx2");
}

TEST_CASE("unsupported variants are rejected") {
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (!simd::isa_supported(isa)) CHECK_THROWS(simd::kernels_for(isa));
  }
}

TEST_CASE("squared distances agree bitwise with the scalar kernel") {
  const auto& ref = simd::kernels_for(Isa::Scalar);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (Isa isa : vector_isas()) {
    const auto& k = simd::kernels_for(isa);
    CAPTURE(simd::isa_name(isa));
    for (std::size_t n = 0; n < 70; ++n) {
      std::vector<double> xs(n), ys(n), zs(n);
      for (std::size_t i = 0; i < n; ++i) {
        xs[i] = u(rng);
        ys[i] = u(rng) * 1e-7;
        zs[i] = u(rng) * 1e5;
      }
      const double q[3] = {u(rng), u(rng), u(rng)};
      std::vector<double> a(n + 1, -1.0), b(n + 1, -1.0);
      ref.squared_distances(xs.data(), ys.data(), zs.data(), n, q, a.data());
      k.squared_distances(xs.data(), ys.data(), zs.data(), n, q, b.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);
      CHECK(b[n] == -1.0);
    }
  }
}

TEST_CASE("xor argmin agrees with the scalar kernel, ties included") {
  const auto& ref = simd::kernels_for(Isa::Scalar);
  std::mt19937_64 rng(5);
  std::vector<std::uint32_t> masks(256);
  for (unsigned occ = 0; occ < 256; ++occ) masks[occ] = consistent_pattern(static_cast<std::uint8_t>(occ));
  std::vector<std::uint32_t> random_masks(64);
  for (auto& m : random_masks) m = static_cast<std::uint32_t>(rng()) & 0x0fffffffu;
  random_masks[40] = random_masks[9];  // duplicate forces a tie

  for (Isa isa : vector_isas()) {
    const auto& k = simd::kernels_for(isa);
    CAPTURE(simd::isa_name(isa));
    for (int t = 0; t < 5000; ++t) {
      const std::uint32_t pattern = static_cast<std::uint32_t>(rng()) & 0x0fffffffu;
      for (const auto* set : {&masks, &random_masks}) {
        for (std::size_t n : {std::size_t{8}, std::size_t{16}, set->size()}) {
          unsigned ca = 99, cb = 99;
          const auto ia = ref.argmin_xor_cost(pattern, set->data(), n, &ca);
          const auto ib = k.argmin_xor_cost(pattern, set->data(), n, &cb);
          CHECK(ia == ib);
          CHECK(ca == cb);
        }
      }
    }
    unsigned ca = 0, cb = 0;
    CHECK(ref.argmin_xor_cost(random_masks[9], random_masks.data(), 64, &ca) ==
          k.argmin_xor_cost(random_masks[9], random_masks.data(), 64, &cb));
    CHECK(cb == 0);
  }
}

TEST_CASE("forced variants give identical kd-tree answers") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point3> pts;
  for (int i = 0; i < 2000; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
  std::vector<Point3> queries;
  for (int i = 0; i < 200; ++i) queries.emplace_back(u(rng), u(rng), u(rng));

  std::vector<std::vector<Neighbor>> ref;
  {
    ForceGuard g(Isa::Scalar);
    KdTree tree{std::span<const Point3>(pts)};
    for (const auto& q : queries) ref.push_back(tree.knn(q, 12));
  }
  for (Isa isa : vector_isas()) {
    ForceGuard g(isa);
    CHECK(simd::kernels().isa == isa);
    KdTree tree{std::span<const Point3>(pts)};
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto got = tree.knn(queries[i], 12);
      REQUIRE(got.size() == ref[i].size());
      for (std::size_t j = 0; j < got.size(); ++j) {
        CHECK(got[j].id == ref[i][j].id);
        CHECK(got[j].distance == ref[i][j].distance);
      }
    }
  }
}

TEST_CASE("forced variants give identical cube matches") {
  std::mt19937_64 rng(13);
  std::vector<std::uint32_t> patterns(4000);
  for (auto& p : patterns) p = static_cast<std::uint32_t>(rng()) & 0x0fffffffu;
  std::vector<CubeMatch> ref;
  {
    ForceGuard g(Isa::Scalar);
    for (auto p : patterns) ref.push_back(match_cube_configuration(p));
  }
  for (Isa isa : vector_isas()) {
    ForceGuard g(isa);
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      const auto m = match_cube_configuration(patterns[i]);
      CHECK(m.occupancy == ref[i].occupancy);
      CHECK(m.cost == ref[i].cost);
    }
  }
}
