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
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "udfmesh/errors.hpp"

namespace udfmesh::simd {
namespace {

std::atomic<const KernelTable*> g_forced{nullptr};

bool cpu_has_avx2() {
#if defined(UDFMESH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

const KernelTable* select_default() {
  if (const char* env = std::getenv("UDFMESH_SIMD")) {
    const std::string name(env);
    if (name == "scalar") return &detail::kScalarKernels;
    if (name == "avx2" && isa_supported(Isa::Avx2)) return &kernels_for(Isa::Avx2);
    if (name == "neon" && isa_supported(Isa::Neon)) return &kernels_for(Isa::Neon);
  }
  if (isa_supported(Isa::Avx2)) return &kernels_for(Isa::Avx2);
  if (isa_supported(Isa::Neon)) return &kernels_for(Isa::Neon);
  return &detail::kScalarKernels;
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return cpu_has_avx2();
    case Isa::Neon:
#if defined(UDFMESH_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw InvalidArgument("SIMD variant not supported on this CPU: " + std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(UDFMESH_HAVE_AVX2)
    case Isa::Avx2:
      return detail::kAvx2Kernels;
#endif
#if defined(UDFMESH_HAVE_NEON)
    case Isa::Neon:
      return detail::kNeonKernels;
#endif
    default:
      return detail::kScalarKernels;
  }
}

const KernelTable& kernels() {
  if (const KernelTable* forced = g_forced.load(std::memory_order_acquire)) return *forced;
  static const KernelTable* selected = select_default();
  return *selected;
}

void force_isa(Isa isa) { g_forced.store(&kernels_for(isa), std::memory_order_release); }

}  // namespace udfmesh::simd
