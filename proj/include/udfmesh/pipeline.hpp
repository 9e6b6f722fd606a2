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

#include "udfmesh/extraction.hpp"
#include "udfmesh/geometry.hpp"
#include "udfmesh/distance_field.hpp"
#include "udfmesh/patches.hpp"

namespace udfmesh {

struct PipelineConfig {
  PatchParams patch;
  FieldParams field;
  std::size_t resolution = 128;
  double tau = 5e-4;
  std::size_t padding_cells = 2;
  std::uint64_t seed = 0;
  /// Map the input into [-0.5, 0.5]^3 before processing and back afterwards.
  bool normalize = true;
  unsigned threads = 0;  // 0 = all hardware threads

  void validate() const;
};

/// Identity when normalization is off.
Normalization choose_normalization(const PointCloud& cloud, const PipelineConfig& config);

/// Sparse cloud -> UdfGrid, everything in normalized coordinates.
struct FieldStage {
  Normalization normalization;
  UpsampleResult upsampled;
  UdfGrid grid;  // already quantized to the on-disk precision
};
FieldStage compute_field(const PointCloud& cloud, const PipelineConfig& config);

/// Edge-based extraction on a grid in normalized coordinates, mesh mapped back through `norm`.
TriangleMesh extract_and_denormalize(const UdfGrid& grid, double tau, const Normalization& norm,
                                     unsigned threads, ExtractionStats* stats = nullptr);

struct PipelineResult {
  FieldStage field;
  TriangleMesh mesh;
  ExtractionStats stats;
};
PipelineResult reconstruct(const PointCloud& cloud, const PipelineConfig& config);

}  // namespace udfmesh
