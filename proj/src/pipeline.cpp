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

#include "udfmesh/pipeline.hpp"

#include "udfmesh/errors.hpp"
#include "udfmesh/io.hpp"

namespace udfmesh {

void PipelineConfig::validate() const {
  patch.validate();
  if (field.k < 1) throw InvalidArgument("K must be >= 1");
  if (resolution < 2) throw InvalidArgument("grid resolution must be >= 2");
  if (2 * padding_cells >= resolution) throw InvalidArgument("padding leaves no interior cells");
  if (!(tau >= 0.0)) throw InvalidArgument("tau must be >= 0");
}

Normalization choose_normalization(const PointCloud& cloud, const PipelineConfig& config) {
  if (!config.normalize) return Normalization{};
  return Normalization::fit(cloud.points());
}

FieldStage compute_field(const PointCloud& cloud, const PipelineConfig& config) {
  config.validate();
  if (cloud.size() < config.patch.k_fit) throw InvalidArgument("input has fewer points than k_fit");
  FieldStage st;
  st.normalization = choose_normalization(cloud, config);
  std::vector<Point3> local;
  local.reserve(cloud.size());
  for (const auto& p : cloud.points()) local.push_back(st.normalization.apply(p));
  const PointCloud normalized(std::move(local));

  st.upsampled = upsample(normalized, config.patch, config.threads);
  const DistanceField field(st.upsampled.dense, config.field);
  const Aabb box = padded_grid_bbox(Aabb::of(normalized.points()), config.resolution,
                                    config.padding_cells);
  st.grid = quantize_grid(sample_grid(field, config.resolution, box, config.threads));
  return st;
}

TriangleMesh extract_and_denormalize(const UdfGrid& grid, double tau, const Normalization& norm,
                                     unsigned threads, ExtractionStats* stats) {
  TriangleMesh mesh = extract_mesh(grid, tau, threads, stats);
  for (auto& v : mesh.vertices) v = norm.invert(v);
  return mesh;
}

PipelineResult reconstruct(const PointCloud& cloud, const PipelineConfig& config) {
  PipelineResult r;
  r.field = compute_field(cloud, config);
  r.mesh = extract_and_denormalize(r.field.grid, config.tau, r.field.normalization, config.threads,
                                   &r.stats);
  return r;
}

}  // namespace udfmesh
