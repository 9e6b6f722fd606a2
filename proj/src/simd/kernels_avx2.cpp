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

#include <immintrin.h>

#include <bit>

#include "kernels_internal.hpp"

namespace udfmesh::simd::detail {
namespace {

void squared_distances_avx2(const double* xs, const double* ys, const double* zs, std::size_t n,
                            const double* q, double* out) {
  const __m256d qx = _mm256_set1_pd(q[0]);
  const __m256d qy = _mm256_set1_pd(q[1]);
  const __m256d qz = _mm256_set1_pd(q[2]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), qx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), qy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + i), qz);
    // Same association as the scalar kernel: (dx^2 + dy^2) + dz^2.
    __m256d acc = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(dz, dz));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - q[0];
    const double dy = ys[i] - q[1];
    const double dz = zs[i] - q[2];
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

// Per-lane 32-bit popcount via the nibble lookup trick.
inline __m256i popcount_epi32(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  const __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  const __m256i pairs = _mm256_maddubs_epi16(bytes, _mm256_set1_epi8(1));
  return _mm256_madd_epi16(pairs, _mm256_set1_epi16(1));
}

std::size_t argmin_xor_cost_avx2(std::uint32_t pattern, const std::uint32_t* masks, std::size_t n,
                                 unsigned* cost) {
  const __m256i pat = _mm256_set1_epi32(static_cast<int>(pattern));
  const __m256i step = _mm256_set1_epi32(8);
  __m256i index = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
  __m256i best_cost = _mm256_set1_epi32(0x7fffffff);
  __m256i best_index = _mm256_setzero_si256();
  for (std::size_t i = 0; i < n; i += 8) {
    const __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(masks + i));
    const __m256i c = popcount_epi32(_mm256_xor_si256(m, pat));
    // Strictly smaller only, so each lane keeps its earliest minimum.
    const __m256i better = _mm256_cmpgt_epi32(best_cost, c);
    best_cost = _mm256_blendv_epi8(best_cost, c, better);
    best_index = _mm256_blendv_epi8(best_index, index, better);
    index = _mm256_add_epi32(index, step);
  }
  alignas(32) std::int32_t costs[8];
  alignas(32) std::int32_t indices[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(costs), best_cost);
  _mm256_store_si256(reinterpret_cast<__m256i*>(indices), best_index);
  std::int32_t bc = costs[0];
  std::int32_t bi = indices[0];
  for (int lane = 1; lane < 8; ++lane) {
    if (costs[lane] < bc || (costs[lane] == bc && indices[lane] < bi)) {
      bc = costs[lane];
      bi = indices[lane];
    }
  }
  *cost = static_cast<unsigned>(bc);
  return static_cast<std::size_t>(bi);
}

}  // namespace

const KernelTable kAvx2Kernels{Isa::Avx2, &squared_distances_avx2, &argmin_xor_cost_avx2};

}  // namespace udfmesh::simd::detail
