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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "udfmesh/extraction.hpp"
#include "udfmesh/geometry.hpp"

namespace udfmesh {

enum class CloudFormat { Xyz, Ply };
enum class MeshFormat { Obj, Ply };

/// Guess from the file extension (case-insensitive); throws FormatError.
CloudFormat cloud_format_for(const std::string& path);
MeshFormat mesh_format_for(const std::string& path);

/// Positions plus optional per-point normals (empty if the file has none).
struct CloudData {
  std::vector<Point3> points;
  std::vector<Vec3> normals;
};

/// XYZ: one "x y z" per line, extra numeric columns ignored unless there are
/// exactly six (read as a normal); '#' starts a comment.
/// PLY: ascii or binary_little_endian, vertex x/y/z required, nx/ny/nz
/// optional. Errors are ParseError carrying the line (or element) number.
CloudData read_cloud_data(const std::string& path);
CloudData read_cloud_data(std::istream& in, CloudFormat format);
PointCloud read_point_cloud(const std::string& path);

/// XYZ is ASCII with 17 significant digits; PLY is binary little-endian with
/// double coordinates. Normals are written when non-empty.
void write_point_cloud(const std::string& path, const std::vector<Point3>& points,
                       const std::vector<Vec3>& normals = {});
void write_point_cloud(std::ostream& out, CloudFormat format, const std::vector<Point3>& points,
                       const std::vector<Vec3>& normals = {});

/// OBJ: `v` lines (shortest round-trip decimal) and 1-based `f` lines.
/// PLY: binary little-endian, float vertices and uchar/int face lists.
void write_mesh(const TriangleMesh& mesh, const std::string& path);
void write_mesh(const TriangleMesh& mesh, std::ostream& out, MeshFormat format);

/// Reads OBJ (v/f, polygons fanned into triangles, negative indices allowed)
/// or PLY meshes.
TriangleMesh read_mesh(const std::string& path);
TriangleMesh read_mesh(std::istream& in, MeshFormat format);

/// True when the file holds faces (PLY face element with count > 0 or OBJ
/// with `f` lines).
bool file_has_faces(const std::string& path);

/// Size in bytes of a grid dump with the given resolution.
std::uint64_t udf_grid_file_size(std::size_t resolution);

/// "UDFG", u16 version (1), u32 resolution, bbox min/max as 6 f64, then one
/// record (f32 phi, 3 x f32 grad) per lattice vertex in x-major order. All
/// little-endian. Ambiguous vertices are stored with a zero gradient.
void dump_udf_grid(const UdfGrid& grid, const std::string& path);
void dump_udf_grid(const UdfGrid& grid, std::ostream& out);
/// Throws FormatError on bad magic, version, or size.
UdfGrid load_udf_grid(const std::string& path);
UdfGrid load_udf_grid(std::istream& in);

/// The grid as it would come back from dump + load.
UdfGrid quantize_grid(const UdfGrid& grid);

/// Normalization stored next to a grid dump as "key=value" lines.
void write_normalization(const Normalization& norm, const std::string& path);
Normalization read_normalization(const std::string& path);
std::string normalization_sidecar(const std::string& grid_path);

/// Shortest decimal string that round-trips the double.
std::string format_double(double v);

}  // namespace udfmesh
