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

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "udfmesh/cli.hpp"
#include "udfmesh/extraction.hpp"
#include "udfmesh/io.hpp"
#include "udfmesh/oracles.hpp"

using namespace udfmesh;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("udfmesh_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "udfmesh");
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> parse_report(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string sphere_cloud(const TempDir& tmp) {
  const std::string path = tmp.file("sphere.xyz");
  const auto r = run({"gen", "--shape", "sphere:0.4", "--n", "1500", "--seed", "3", "--out", path});
  REQUIRE(r.code == 0);
  return path;
}

}  // namespace

TEST_CASE("gen writes the requested samples") {
  TempDir tmp;
  const auto r = run({"gen", "--shape", "torus:0.3:0.1", "--n", "200", "--out", tmp.file("t.ply"), "--normals"});
  REQUIRE(r.code == 0);
  CHECK(parse_report(r.out).at("points") == "200");
  const auto data = read_cloud_data(tmp.file("t.ply"));
  CHECK(data.points.size() == 200);
  CHECK(data.normals.size() == 200);
  for (const auto& p : data.points) CHECK(analytic_udf(TorusShape{}, p).udf < 1e-12);
}

TEST_CASE("usage errors exit nonzero") {
  TempDir tmp;
  CHECK(run({}).code != 0);
  CHECK(run({"frobnicate"}).code != 0);
  CHECK(run({"gen", "--shape", "sphere:0.4", "--out", tmp.file("a.xyz"), "--bogus"}).code != 0);
  CHECK(run({"gen", "--shape", "sphere:0.4"}).code != 0);
  CHECK(run({"gen", "--shape", "blob:1", "--out", tmp.file("a.xyz")}).code != 0);
  const auto missing = run({"reconstruct", "--in", tmp.file("none.xyz"), "--out", tmp.file("m.obj")});
  CHECK(missing.code != 0);
  CHECK_FALSE(missing.err.empty());
  CHECK(run({"eval", "--rec", tmp.file("m.obj")}).code != 0);
  CHECK(run({"reconstruct", "--in", "x.xyz", "--out", "m.obj", "--value-weights", "cubic"}).code != 0);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("reconstruct, eval, and the split udf + emc path") {
  TempDir tmp;
  const std::string cloud = sphere_cloud(tmp);
  const auto rec = run({"reconstruct", "--in", cloud, "--out", tmp.file("m.ply"), "--res", "32",
                        "--grid-out", tmp.file("g.udfg"), "--dense-out", tmp.file("d.ply")});
  REQUIRE(rec.code == 0);
  CHECK(fs::exists(tmp.file("m.ply")));
  CHECK(fs::file_size(tmp.file("g.udfg")) == udf_grid_file_size(32));
  CHECK(read_cloud_data(tmp.file("d.ply")).normals.size() == 1500 * 16);

  const auto udf = run({"udf", "--in", cloud, "--out", tmp.file("h.udfg"), "--res", "32"});
  REQUIRE(udf.code == 0);
  CHECK(slurp(tmp.file("g.udfg")) == slurp(tmp.file("h.udfg")));
  CHECK(fs::exists(tmp.file("h.udfg.xform")));
  const auto emc = run({"emc", "--grid", tmp.file("h.udfg"), "--out", tmp.file("n.ply")});
  REQUIRE(emc.code == 0);
  CHECK(slurp(tmp.file("m.ply")) == slurp(tmp.file("n.ply")));

  const auto ev = run({"eval", "--rec", tmp.file("m.ply"), "--gt-shape", "sphere:0.4", "--eps", "0.01",
                       "0.05", "--n", "5000", "--json", tmp.file("r.json"), "--udf-cloud", tmp.file("d.ply")});
  REQUIRE(ev.code == 0);
  const auto kv = parse_report(ev.out);
  for (const char* key : {"cd", "cd_x100", "f1_0.01", "precision_0.01", "recall_0.01", "vertices",
                          "triangles", "boundary_edges", "euler", "components", "udf_mae",
                          "grad_angle_mean_deg"}) {
    CAPTURE(key);
    CHECK(kv.count(key) == 1);
  }
  CHECK(std::stod(kv.at("cd")) < 0.02);
  CHECK(std::stod(kv.at("f1_0.05")) > 0.99);
  CHECK(std::stod(kv.at("f1_0.01")) <= 1.0);
  CHECK(std::stod(kv.at("udf_mae")) < 2e-3);
  const auto js = nlohmann::json::parse(slurp(tmp.file("r.json")));
  CHECK(js["cd"].get<double>() == std::stod(kv.at("cd")));

  // two default thresholds when --eps is omitted
  const auto dflt = parse_report(run({"eval", "--rec", tmp.file("m.ply"), "--gt", tmp.file("n.ply"), "--n", "500"}).out);
  CHECK(dflt.count("f1_0.005") == 1);
  CHECK(dflt.count("f1_0.01") == 1);
  CHECK(std::stod(dflt.at("cd")) < 0.05);
}

TEST_CASE("emc on an analytic grid matches in-process extraction") {
  TempDir tmp;
  const auto grid = quantize_grid(sample_grid(OracleField(FieldOracle::from_shape(TorusShape{})), 24,
                                              Aabb{Point3::Constant(-0.5), Point3::Constant(0.5)}));
  dump_udf_grid(grid, tmp.file("t.udfg"));
  const auto r = run({"emc", "--grid", tmp.file("t.udfg"), "--out", tmp.file("t.obj")});
  REQUIRE(r.code == 0);
  const auto mesh = extract_mesh(grid, 5e-4);
  std::ostringstream want;
  write_mesh(mesh, want, MeshFormat::Obj);
  CHECK(slurp(tmp.file("t.obj")) == want.str());
}

TEST_CASE("config files supply defaults that flags override") {
  TempDir tmp;
  const std::string cloud = sphere_cloud(tmp);
  std::ofstream(tmp.file("c.cfg")) << "# grid settings\nres = 16\nK=8\n";
  const auto a = run({"udf", "--in", cloud, "--out", tmp.file("a.udfg"), "--config", tmp.file("c.cfg")});
  REQUIRE(a.code == 0);
  CHECK(load_udf_grid(tmp.file("a.udfg")).resolution == 16);
  const auto b = run({"udf", "--in", cloud, "--out", tmp.file("b.udfg"), "--config", tmp.file("c.cfg"),
                      "--res", "12"});
  REQUIRE(b.code == 0);
  CHECK(load_udf_grid(tmp.file("b.udfg")).resolution == 12);

  std::ofstream(tmp.file("bad.cfg")) << "res\n";
  CHECK(run({"udf", "--in", cloud, "--out", tmp.file("c.udfg"), "--config", tmp.file("bad.cfg")}).code != 0);
  std::ofstream(tmp.file("unknown.cfg")) << "colour=red\n";
  CHECK(run({"udf", "--in", cloud, "--out", tmp.file("c.udfg"), "--config", tmp.file("unknown.cfg")}).code != 0);
}

TEST_CASE("upsample writes an oriented cloud") {
  TempDir tmp;
  const std::string cloud = sphere_cloud(tmp);
  const auto r = run({"upsample", "--in", cloud, "--out", tmp.file("u.ply"), "--M", "4"});
  REQUIRE(r.code == 0);
  const auto d = read_cloud_data(tmp.file("u.ply"));
  CHECK(d.points.size() == 6000);
  CHECK(d.normals.size() == 6000);
  CHECK(run({"upsample", "--in", cloud, "--out", tmp.file("v.ply"), "--M", "0"}).code != 0);
}
