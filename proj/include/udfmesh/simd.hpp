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
#include <string_view>

// Data-parallel inner loops with a scalar reference and per-ISA variants.
// Every variant must produce bit-identical output to the scalar kernels;
// tests/test_simd.cpp enforces this.
namespace udfmesh::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  /// out[i] = (x[i]-q[0])^2 + (y[i]-q[1])^2 + (z[i]-q[2])^2, evaluated left to right.
  void (*squared_distances)(const double* xs, const double* ys, const double* zs, std::size_t n,
                            const double* q, double* out);
  /// First index i in [0, n) minimizing popcount(pattern ^ masks[i]); n must be a
  /// multiple of 8. The minimal cost is written to *cost.
  std::size_t (*argmin_xor_cost)(std::uint32_t pattern, const std::uint32_t* masks, std::size_t n,
                                 unsigned* cost);
};

bool isa_supported(Isa isa);
std::string_view isa_name(Isa isa);

/// Kernels for a specific ISA; throws InvalidArgument when unsupported.
const KernelTable& kernels_for(Isa isa);

/// Kernels selected at runtime: the widest supported ISA, unless the
/// UDFMESH_SIMD environment variable names another ("scalar", "avx2", "neon").
const KernelTable& kernels();

/// Overrides the runtime selection (tests and benchmarking).
void force_isa(Isa isa);

}  // namespace udfmesh::simd
