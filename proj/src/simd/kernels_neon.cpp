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

#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace udfmesh::simd::detail {
namespace {

void squared_distances_neon(const double* xs, const double* ys, const double* zs, std::size_t n,
                            const double* q, double* out) {
  const float64x2_t qx = vdupq_n_f64(q[0]);
  const float64x2_t qy = vdupq_n_f64(q[1]);
  const float64x2_t qz = vdupq_n_f64(q[2]);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), qx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), qy);
    const float64x2_t dz = vsubq_f64(vld1q_f64(zs + i), qz);
    // vmulq/vaddq, never vfmaq: must round like the scalar kernel.
    float64x2_t acc = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
    acc = vaddq_f64(acc, vmulq_f64(dz, dz));
    vst1q_f64(out + i, acc);
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - q[0];
    const double dy = ys[i] - q[1];
    const double dz = zs[i] - q[2];
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

std::size_t argmin_xor_cost_neon(std::uint32_t pattern, const std::uint32_t* masks, std::size_t n,
                                 unsigned* cost) {
  const uint32x4_t pat = vdupq_n_u32(pattern);
  const uint32x4_t step = vdupq_n_u32(4);
  const std::uint32_t start[4] = {0, 1, 2, 3};
  uint32x4_t index = vld1q_u32(start);
  uint32x4_t best_cost = vdupq_n_u32(0xffffffffu);
  uint32x4_t best_index = vdupq_n_u32(0);
  for (std::size_t i = 0; i < n; i += 4) {
    const uint32x4_t x = veorq_u32(vld1q_u32(masks + i), pat);
    const uint8x16_t bytes = vcntq_u8(vreinterpretq_u8_u32(x));
    const uint32x4_t c = vpaddlq_u16(vpaddlq_u8(bytes));
    const uint32x4_t better = vcltq_u32(c, best_cost);
    best_cost = vbslq_u32(better, c, best_cost);
    best_index = vbslq_u32(better, index, best_index);
    index = vaddq_u32(index, step);
  }
  std::uint32_t costs[4];
  std::uint32_t indices[4];
  vst1q_u32(costs, best_cost);
  vst1q_u32(indices, best_index);
  std::uint32_t bc = costs[0];
  std::uint32_t bi = indices[0];
  for (int lane = 1; lane < 4; ++lane) {
    if (costs[lane] < bc || (costs[lane] == bc && indices[lane] < bi)) {
      bc = costs[lane];
      bi = indices[lane];
    }
  }
  *cost = bc;
  return bi;
}

}  // namespace

const KernelTable kNeonKernels{Isa::Neon, &squared_distances_neon, &argmin_xor_cost_neon};

}  // namespace udfmesh::simd::detail
