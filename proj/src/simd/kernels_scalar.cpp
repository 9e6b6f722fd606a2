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

#include <bit>

#include "kernels_internal.hpp"

namespace udfmesh::simd::detail {
namespace {

void squared_distances_scalar(const double* xs, const double* ys, const double* zs, std::size_t n,
                              const double* q, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - q[0];
    const double dy = ys[i] - q[1];
    const double dz = zs[i] - q[2];
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

std::size_t argmin_xor_cost_scalar(std::uint32_t pattern, const std::uint32_t* masks, std::size_t n,
                                   unsigned* cost) {
  std::size_t best = 0;
  unsigned best_cost = ~0u;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<unsigned>(std::popcount(pattern ^ masks[i]));
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  *cost = best_cost;
  return best;
}

}  // namespace

const KernelTable kScalarKernels{Isa::Scalar, &squared_distances_scalar, &argmin_xor_cost_scalar};

}  // namespace udfmesh::simd::detail
