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

#include "udfmesh/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include "udfmesh/errors.hpp"

namespace udfmesh {
namespace {

constexpr char kGridMagic[4] = {'U', 'D', 'F', 'G'};
constexpr std::uint16_t kGridVersion = 1;
constexpr std::uint64_t kGridHeaderBytes = 4 + 2 + 4 + 48;
constexpr std::uint64_t kGridRecordBytes = 16;

std::string lower_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return {};
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

void finish(std::ostream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

template <class T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), sizeof(T));
}

template <class T>
bool get_le(std::istream& in, T& value) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) return false;
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  std::memcpy(&value, bytes.data(), sizeof(T));
  return true;
}

template <class T>
T decode_le(const char* p) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_number(std::string_view s, double& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// ---- PLY ------------------------------------------------------------------

enum class PlyType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

PlyType ply_type(std::string_view name, std::size_t line) {
  static const std::map<std::string_view, PlyType> kTypes = {
      {"char", PlyType::Int8},      {"int8", PlyType::Int8},       {"uchar", PlyType::UInt8},
      {"uint8", PlyType::UInt8},    {"short", PlyType::Int16},     {"int16", PlyType::Int16},
      {"ushort", PlyType::UInt16},  {"uint16", PlyType::UInt16},   {"int", PlyType::Int32},
      {"int32", PlyType::Int32},    {"uint", PlyType::UInt32},     {"uint32", PlyType::UInt32},
      {"float", PlyType::Float32},  {"float32", PlyType::Float32}, {"double", PlyType::Float64},
      {"float64", PlyType::Float64}};
  const auto it = kTypes.find(name);
  if (it == kTypes.end()) throw ParseError("unknown PLY property type '" + std::string(name) + "'", line);
  return it->second;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::Float32;
  bool is_list = false;
  PlyType count_type = PlyType::UInt8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> props;

  int find(std::string_view prop) const {
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (props[i].name == prop) return static_cast<int>(i);
    }
    return -1;
  }
};

struct PlyHeader {
  bool binary = false;
  std::vector<PlyElement> elements;
  std::size_t lines = 0;
};

PlyHeader read_ply_header(std::istream& in) {
  PlyHeader h;
  std::string line;
  bool have_format = false;
  while (true) {
    if (!std::getline(in, line)) throw ParseError("PLY header not terminated", h.lines + 1);
    ++h.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tok = split_ws(line);
    if (h.lines == 1) {
      if (tok.size() != 1 || tok[0] != "ply") throw ParseError("missing 'ply' magic", 1);
      continue;
    }
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "format") {
      if (tok.size() != 3) throw ParseError("malformed format line", h.lines);
      if (tok[1] == "ascii") {
        h.binary = false;
      } else if (tok[1] == "binary_little_endian") {
        h.binary = true;
      } else {
        throw ParseError("unsupported PLY format '" + std::string(tok[1]) + "'", h.lines);
      }
      have_format = true;
    } else if (tok[0] == "element") {
      double count = 0.0;
      if (tok.size() != 3 || !parse_number(tok[2], count) || count < 0 ||
          count != static_cast<double>(static_cast<std::size_t>(count))) {
        throw ParseError("malformed element line", h.lines);
      }
      h.elements.push_back(PlyElement{std::string(tok[1]), static_cast<std::size_t>(count), {}});
    } else if (tok[0] == "property") {
      if (h.elements.empty()) throw ParseError("property before any element", h.lines);
      PlyProperty p;
      if (tok.size() == 5 && tok[1] == "list") {
        p.is_list = true;
        p.count_type = ply_type(tok[2], h.lines);
        p.type = ply_type(tok[3], h.lines);
        p.name = tok[4];
      } else if (tok.size() == 3) {
        p.type = ply_type(tok[1], h.lines);
        p.name = tok[2];
      } else {
        throw ParseError("malformed property line", h.lines);
      }
      h.elements.back().props.push_back(p);
    } else {
      throw ParseError("unexpected PLY header line", h.lines);
    }
  }
  if (!have_format) throw ParseError("PLY header has no format line", h.lines);
  return h;
}

// Reads element rows one at a time in either encoding.
class PlyBody {
 public:
  PlyBody(std::istream& in, const PlyHeader& h) : in_(in), binary_(h.binary), line_(h.lines) {}

  // Reads one row of `el` into `scalars` (one per property; lists store
  // their values in `lists` instead). `row` is the 1-based element number.
  void read_row(const PlyElement& el, std::size_t row, std::vector<double>& scalars,
                std::vector<std::vector<double>>& lists) {
    scalars.assign(el.props.size(), 0.0);
    lists.resize(el.props.size());
    if (binary_) {
      for (std::size_t i = 0; i < el.props.size(); ++i) {
        const auto& p = el.props[i];
        if (p.is_list) {
          const double n = binary_value(p.count_type, el, row);
          if (n < 0) throw ParseError("negative list length in " + el.name + " " + std::to_string(row), row);
          lists[i].resize(static_cast<std::size_t>(n));
          for (auto& v : lists[i]) v = binary_value(p.type, el, row);
        } else {
          scalars[i] = binary_value(p.type, el, row);
        }
      }
      return;
    }
    std::string line;
    do {
      if (!std::getline(in_, line)) {
        throw ParseError("unexpected end of file in " + el.name + " " + std::to_string(row), line_ + 1);
      }
      ++line_;
    } while (split_ws(line).empty());
    const auto tok = split_ws(line);
    std::size_t t = 0;
    auto next = [&]() {
      double v = 0.0;
      if (t >= tok.size() || !parse_number(tok[t], v)) {
        throw ParseError("malformed " + el.name + " on line " + std::to_string(line_), line_);
      }
      ++t;
      return v;
    };
    for (std::size_t i = 0; i < el.props.size(); ++i) {
      const auto& p = el.props[i];
      if (p.is_list) {
        const double n = next();
        if (n < 0 || n != static_cast<double>(static_cast<std::size_t>(n))) {
          throw ParseError("bad list length on line " + std::to_string(line_), line_);
        }
        lists[i].resize(static_cast<std::size_t>(n));
        for (auto& v : lists[i]) v = next();
      } else {
        scalars[i] = next();
      }
    }
    if (t != tok.size()) throw ParseError("extra values on line " + std::to_string(line_), line_);
  }

 private:
  double binary_value(PlyType type, const PlyElement& el, std::size_t row) {
    bool ok = false;
    double v = 0.0;
    switch (type) {
      case PlyType::Int8: { std::int8_t x; ok = get_le(in_, x); v = x; break; }
      case PlyType::UInt8: { std::uint8_t x; ok = get_le(in_, x); v = x; break; }
      case PlyType::Int16: { std::int16_t x; ok = get_le(in_, x); v = x; break; }
      case PlyType::UInt16: { std::uint16_t x; ok = get_le(in_, x); v = x; break; }
      case PlyType::Int32: { std::int32_t x; ok = get_le(in_, x); v = x; break; }
      case PlyType::UInt32: { std::uint32_t x; ok = get_le(in_, x); v = x; break; }
      case PlyType::Float32: { float x; ok = get_le(in_, x); v = x; break; }
      case PlyType::Float64: { double x; ok = get_le(in_, x); v = x; break; }
    }
    if (!ok) throw ParseError("truncated " + el.name + " element " + std::to_string(row), row);
    return v;
  }

  std::istream& in_;
  bool binary_;
  std::size_t line_;
};

struct PlyContents {
  std::vector<Point3> points;
  std::vector<Vec3> normals;
  std::vector<Triangle> triangles;
};

PlyContents read_ply(std::istream& in, bool want_faces) {
  const PlyHeader h = read_ply_header(in);
  PlyBody body(in, h);
  PlyContents out;
  bool saw_vertex = false;
  std::vector<double> scalars;
  std::vector<std::vector<double>> lists;
  for (const auto& el : h.elements) {
    if (el.name == "vertex") {
      saw_vertex = true;
      const int ix = el.find("x"), iy = el.find("y"), iz = el.find("z");
      if (ix < 0 || iy < 0 || iz < 0) throw ParseError("vertex element lacks x/y/z", h.lines);
      const int nx = el.find("nx"), ny = el.find("ny"), nz = el.find("nz");
      const bool normals = nx >= 0 && ny >= 0 && nz >= 0;
      out.points.reserve(el.count);
      for (std::size_t r = 0; r < el.count; ++r) {
        body.read_row(el, r + 1, scalars, lists);
        out.points.emplace_back(scalars[ix], scalars[iy], scalars[iz]);
        if (normals) out.normals.emplace_back(scalars[nx], scalars[ny], scalars[nz]);
      }
    } else if (el.name == "face" && want_faces) {
      int idx = el.find("vertex_indices");
      if (idx < 0) idx = el.find("vertex_index");
      if (idx < 0 || !el.props[idx].is_list) throw ParseError("face element lacks vertex_indices", h.lines);
      for (std::size_t r = 0; r < el.count; ++r) {
        body.read_row(el, r + 1, scalars, lists);
        const auto& f = lists[idx];
        if (f.size() < 3) throw ParseError("face " + std::to_string(r + 1) + " has fewer than 3 vertices", r + 1);
        for (std::size_t k = 1; k + 1 < f.size(); ++k) {
          out.triangles.push_back({static_cast<std::uint32_t>(f[0]), static_cast<std::uint32_t>(f[k]),
                                   static_cast<std::uint32_t>(f[k + 1])});
        }
      }
    } else {
      for (std::size_t r = 0; r < el.count; ++r) body.read_row(el, r + 1, scalars, lists);
    }
  }
  if (!saw_vertex) throw ParseError("PLY file has no vertex element", h.lines);
  for (const auto& t : out.triangles) {
    for (auto v : t) {
      if (v >= out.points.size()) throw ParseError("face references a missing vertex", h.lines);
    }
  }
  return out;
}

// ---- XYZ / OBJ --------------------------------------------------------------

CloudData read_xyz(std::istream& in) {
  CloudData out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() < 3) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'x y z', got " +
                           std::to_string(tok.size()) + " field(s)",
                       line_no);
    }
    std::vector<double> v(tok.size());
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (!parse_number(tok[i], v[i])) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(tok[i]) + "'",
                         line_no);
      }
    }
    out.points.emplace_back(v[0], v[1], v[2]);
    if (tok.size() == 6) out.normals.emplace_back(v[3], v[4], v[5]);
  }
  if (!out.normals.empty() && out.normals.size() != out.points.size()) out.normals.clear();
  return out;
}

TriangleMesh read_obj(std::istream& in) {
  TriangleMesh mesh;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::vector<long long>, std::size_t>> faces;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "v") {
      double x, y, z;
      if (tok.size() < 4 || !parse_number(tok[1], x) || !parse_number(tok[2], y) ||
          !parse_number(tok[3], z)) {
        throw ParseError("line " + std::to_string(line_no) + ": malformed vertex", line_no);
      }
      mesh.vertices.emplace_back(x, y, z);
    } else if (tok[0] == "f") {
      if (tok.size() < 4) throw ParseError("line " + std::to_string(line_no) + ": face needs 3 vertices", line_no);
      std::vector<long long> ids;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto ref = tok[i].substr(0, tok[i].find('/'));
        long long id = 0;
        const auto [ptr, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), id);
        if (ec != std::errc() || ptr != ref.data() + ref.size() || id == 0) {
          throw ParseError("line " + std::to_string(line_no) + ": bad face index", line_no);
        }
        ids.push_back(id);
      }
      faces.emplace_back(std::move(ids), line_no);
    }
  }
  const auto n = static_cast<long long>(mesh.vertices.size());
  for (const auto& [ids, where] : faces) {
    std::vector<std::uint32_t> resolved;
    for (long long id : ids) {
      const long long z = id > 0 ? id - 1 : n + id;
      if (z < 0 || z >= n) throw ParseError("line " + std::to_string(where) + ": index out of range", where);
      resolved.push_back(static_cast<std::uint32_t>(z));
    }
    for (std::size_t k = 1; k + 1 < resolved.size(); ++k) {
      mesh.triangles.push_back({resolved[0], resolved[k], resolved[k + 1]});
    }
  }
  return mesh;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

CloudFormat cloud_format_for(const std::string& path) {
  const std::string ext = lower_extension(path);
  if (ext == "xyz" || ext == "txt") return CloudFormat::Xyz;
  if (ext == "ply") return CloudFormat::Ply;
  throw FormatError("unrecognized point cloud extension: " + path);
}

MeshFormat mesh_format_for(const std::string& path) {
  const std::string ext = lower_extension(path);
  if (ext == "obj") return MeshFormat::Obj;
  if (ext == "ply") return MeshFormat::Ply;
  throw FormatError("unrecognized mesh extension: " + path);
}

CloudData read_cloud_data(std::istream& in, CloudFormat format) {
  if (format == CloudFormat::Xyz) return read_xyz(in);
  PlyContents ply = read_ply(in, false);
  return CloudData{std::move(ply.points), std::move(ply.normals)};
}

CloudData read_cloud_data(const std::string& path) {
  const CloudFormat format = cloud_format_for(path);
  auto in = open_in(path);
  return read_cloud_data(in, format);
}

PointCloud read_point_cloud(const std::string& path) {
  return PointCloud(read_cloud_data(path).points);
}

void write_point_cloud(std::ostream& out, CloudFormat format, const std::vector<Point3>& points,
                       const std::vector<Vec3>& normals) {
  if (!normals.empty() && normals.size() != points.size()) {
    throw InvalidArgument("normals and points differ in length");
  }
  const bool with_normals = !normals.empty();
  if (format == CloudFormat::Xyz) {
    std::array<char, 512> buf;
    for (std::size_t i = 0; i < points.size(); ++i) {
      int len;
      if (with_normals) {
        len = std::snprintf(buf.data(), buf.size(), "%.17g %.17g %.17g %.17g %.17g %.17g\n", points[i].x(),
                            points[i].y(), points[i].z(), normals[i].x(), normals[i].y(), normals[i].z());
      } else {
        len = std::snprintf(buf.data(), buf.size(), "%.17g %.17g %.17g\n", points[i].x(), points[i].y(),
                            points[i].z());
      }
      out.write(buf.data(), len);
    }
    return;
  }
  out << "ply\nformat binary_little_endian 1.0\nelement vertex " << points.size()
      << "\nproperty double x\nproperty double y\nproperty double z\n";
  if (with_normals) out << "property double nx\nproperty double ny\nproperty double nz\n";
  out << "end_header\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int k = 0; k < 3; ++k) put_le(out, points[i][k]);
    if (with_normals) {
      for (int k = 0; k < 3; ++k) put_le(out, normals[i][k]);
    }
  }
}

void write_point_cloud(const std::string& path, const std::vector<Point3>& points,
                       const std::vector<Vec3>& normals) {
  const CloudFormat format = cloud_format_for(path);
  auto out = open_out(path);
  write_point_cloud(out, format, points, normals);
  finish(out, path);
}

void write_mesh(const TriangleMesh& mesh, std::ostream& out, MeshFormat format) {
  if (format == MeshFormat::Obj) {
    for (const auto& v : mesh.vertices) {
      out << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z())
          << '\n';
    }
    for (const auto& t : mesh.triangles) {
      out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
    return;
  }
  out << "ply\nformat binary_little_endian 1.0\nelement vertex " << mesh.vertices.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nelement face " << mesh.triangles.size()
      << "\nproperty list uchar int vertex_indices\nend_header\n";
  for (const auto& v : mesh.vertices) {
    for (int k = 0; k < 3; ++k) put_le(out, static_cast<float>(v[k]));
  }
  for (const auto& t : mesh.triangles) {
    put_le(out, static_cast<std::uint8_t>(3));
    for (auto id : t) put_le(out, static_cast<std::int32_t>(id));
  }
}

void write_mesh(const TriangleMesh& mesh, const std::string& path) {
  const MeshFormat format = mesh_format_for(path);
  auto out = open_out(path);
  write_mesh(mesh, out, format);
  finish(out, path);
}

TriangleMesh read_mesh(std::istream& in, MeshFormat format) {
  if (format == MeshFormat::Obj) return read_obj(in);
  PlyContents ply = read_ply(in, true);
  TriangleMesh mesh;
  mesh.vertices = std::move(ply.points);
  mesh.triangles = std::move(ply.triangles);
  return mesh;
}

TriangleMesh read_mesh(const std::string& path) {
  const MeshFormat format = mesh_format_for(path);
  auto in = open_in(path);
  return read_mesh(in, format);
}

bool file_has_faces(const std::string& path) {
  const std::string ext = lower_extension(path);
  if (ext == "xyz" || ext == "txt") return false;
  auto in = open_in(path);
  if (ext == "obj") {
    std::string line;
    while (std::getline(in, line)) {
      const auto tok = split_ws(line);
      if (!tok.empty() && tok[0] == "f") return true;
    }
    return false;
  }
  if (ext == "ply") {
    const PlyHeader h = read_ply_header(in);
    for (const auto& el : h.elements) {
      if (el.name == "face" && el.count > 0) return true;
    }
    return false;
  }
  throw FormatError("unrecognized file extension: " + path);
}

std::uint64_t udf_grid_file_size(std::size_t resolution) {
  const std::uint64_t n = resolution + 1;
  return kGridHeaderBytes + n * n * n * kGridRecordBytes;
}

void dump_udf_grid(const UdfGrid& grid, std::ostream& out) {
  if (grid.phi.size() != grid.vertex_count() || grid.grad.size() != grid.vertex_count()) {
    throw InvalidArgument("grid storage does not match its resolution");
  }
  if (grid.resolution > 0xFFFFFFFFu) throw InvalidArgument("grid resolution too large");
  out.write(kGridMagic, 4);
  put_le(out, kGridVersion);
  put_le(out, static_cast<std::uint32_t>(grid.resolution));
  for (int k = 0; k < 3; ++k) put_le(out, grid.bbox.min[k]);
  for (int k = 0; k < 3; ++k) put_le(out, grid.bbox.max[k]);
  const bool have_flags = grid.ambiguous.size() == grid.vertex_count();
  for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
    put_le(out, static_cast<float>(grid.phi[v]));
    const bool amb = have_flags && grid.ambiguous[v];
    for (int k = 0; k < 3; ++k) put_le(out, amb ? 0.0f : static_cast<float>(grid.grad[v][k]));
  }
}

void dump_udf_grid(const UdfGrid& grid, const std::string& path) {
  auto out = open_out(path);
  dump_udf_grid(grid, out);
  finish(out, path);
}

UdfGrid load_udf_grid(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kGridMagic, 4) != 0) {
    throw FormatError("not a UDFG grid file (bad magic)");
  }
  std::uint16_t version = 0;
  std::uint32_t res = 0;
  if (!get_le(in, version) || !get_le(in, res)) throw FormatError("UDFG header truncated");
  if (version != kGridVersion) throw FormatError("unsupported UDFG version " + std::to_string(version));
  if (res < 1) throw FormatError("UDFG resolution must be >= 1");
  Aabb box;
  for (int k = 0; k < 3; ++k) {
    if (!get_le(in, box.min[k])) throw FormatError("UDFG header truncated");
  }
  for (int k = 0; k < 3; ++k) {
    if (!get_le(in, box.max[k])) throw FormatError("UDFG header truncated");
  }
  if (!is_finite(box.min) || !is_finite(box.max) || !((box.max - box.min).array() > 0.0).all()) {
    throw FormatError("UDFG bounding box is invalid");
  }
  const std::uint64_t n = static_cast<std::uint64_t>(res) + 1;
  const std::uint64_t expected = n * n * n * kGridRecordBytes;
  const auto data_start = in.tellg();
  in.seekg(0, std::ios::end);
  const auto data_end = in.tellg();
  in.seekg(data_start);
  if (data_start < 0 || data_end < 0 ||
      static_cast<std::uint64_t>(data_end - data_start) != expected) {
    throw FormatError("UDFG size mismatch: expected " + std::to_string(kGridHeaderBytes + expected) +
                      " bytes for resolution " + std::to_string(res));
  }
  UdfGrid grid = UdfGrid::allocate(res, box);
  std::vector<char> raw(expected);
  if (!in.read(raw.data(), static_cast<std::streamsize>(expected))) throw FormatError("UDFG data truncated");
  for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
    float rec[4];
    for (int k = 0; k < 4; ++k) rec[k] = decode_le<float>(raw.data() + v * kGridRecordBytes + 4 * k);
    grid.phi[v] = rec[0];
    grid.grad[v] = Vec3(rec[1], rec[2], rec[3]);
    grid.ambiguous[v] = (rec[1] == 0.0f && rec[2] == 0.0f && rec[3] == 0.0f) ? 1 : 0;
  }
  return grid;
}

UdfGrid load_udf_grid(const std::string& path) {
  auto in = open_in(path);
  return load_udf_grid(in);
}

UdfGrid quantize_grid(const UdfGrid& grid) {
  UdfGrid out = grid;
  out.ambiguous.assign(grid.vertex_count(), 0);
  const bool have_flags = grid.ambiguous.size() == grid.vertex_count();
  for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
    out.phi[v] = static_cast<float>(grid.phi[v]);
    Vec3 g = Vec3::Zero();
    if (!(have_flags && grid.ambiguous[v])) {
      const Vec3& src = grid.grad[v];
      g = Vec3(static_cast<float>(src.x()), static_cast<float>(src.y()), static_cast<float>(src.z()));
    }
    out.grad[v] = g;
    out.ambiguous[v] = g.isZero(0.0) ? 1 : 0;
  }
  return out;
}

std::string normalization_sidecar(const std::string& grid_path) { return grid_path + ".xform"; }

void write_normalization(const Normalization& norm, const std::string& path) {
  auto out = open_out(path);
  out << "scale=" << format_double(norm.scale) << '\n'
      << "center_x=" << format_double(norm.center.x()) << '\n'
      << "center_y=" << format_double(norm.center.y()) << '\n'
      << "center_z=" << format_double(norm.center.z()) << '\n';
  finish(out, path);
}

Normalization read_normalization(const std::string& path) {
  auto in = open_in(path);
  std::map<std::string, double> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const auto eq = line.find('=');
    double v = 0.0;
    if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
    const auto key = split_ws(std::string_view(line).substr(0, eq));
    const auto val = split_ws(std::string_view(line).substr(eq + 1));
    if (key.size() != 1 || val.size() != 1 || !parse_number(val[0], v)) {
      throw ParseError("malformed key=value on line " + std::to_string(line_no), line_no);
    }
    kv[std::string(key[0])] = v;
  }
  for (const char* k : {"scale", "center_x", "center_y", "center_z"}) {
    if (!kv.count(k)) throw FormatError(std::string("normalization file lacks ") + k);
  }
  Normalization n;
  n.scale = kv["scale"];
  n.center = Vec3(kv["center_x"], kv["center_y"], kv["center_z"]);
  if (!(n.scale > 0.0) || !std::isfinite(n.scale) || !is_finite(n.center)) {
    throw FormatError("normalization values are invalid");
  }
  return n;
}

}  // namespace udfmesh
