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

#include "udfmesh/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <utility>

#include "udfmesh/errors.hpp"
#include "udfmesh/io.hpp"
#include "udfmesh/metrics.hpp"
#include "udfmesh/oracles.hpp"
#include "udfmesh/pipeline.hpp"

namespace udfmesh {
namespace {

WeightScheme parse_scheme(const std::string& text) {
  if (text == "uniform") return WeightScheme::uniform();
  if (text == "gaussian") return WeightScheme::gaussian();
  if (text == "idw") return WeightScheme::inverse_distance();
  if (text.rfind("idw:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double p = std::stod(text.substr(4), &used);
      if (used == text.size() - 4 && p > 0.0) return WeightScheme::inverse_distance(p);
    } catch (const std::exception&) {
    }
  }
  throw InvalidArgument("unknown weight scheme '" + text + "' (uniform, gaussian, idw[:p])");
}

ValueEstimator parse_estimator(const std::string& text) {
  if (text == "p2t") return ValueEstimator::PointToTangent;
  if (text == "p2p") return ValueEstimator::PointToPoint;
  throw InvalidArgument("unknown estimator '" + text + "' (p2t, p2p)");
}

// Option targets shared by several subcommands.
struct Options {
  PipelineConfig config;
  std::string value_scheme = "gaussian";
  std::string grad_scheme = "gaussian";
  std::string estimator = "p2t";
  bool no_normalize = false;
  std::string config_file;

  std::string in, out, grid_out, dense_out, xform;
  bool no_denormalize = false;

  std::string shape;
  std::size_t n = 3000;
  bool normals = false;

  std::string rec, gt, gt_shape, json, udf_cloud;
  std::vector<double> eps{0.005, 0.01};
  std::size_t eval_n = 100000;

  // Applies the string-valued options to `config`.
  void finalize() {
    config.field.value_weights = parse_scheme(value_scheme);
    config.field.gradient_weights = parse_scheme(grad_scheme);
    config.field.estimator = parse_estimator(estimator);
    config.normalize = !no_normalize;
  }
};

void add_config_option(CLI::App* app, Options& o) {
  app->add_option("--config", o.config_file, "key=value file; command-line flags take precedence");
}

void add_threads_option(CLI::App* app, Options& o) {
  app->add_option("--threads", o.config.threads, "worker threads (0 = all cores)");
}

void add_lgr_options(CLI::App* app, Options& o) {
  auto& l = o.config.patch;
  app->add_option("--M", l.upsample_factor, "samples per input point")->capture_default_str();
  app->add_option("--delta", l.delta, "parameter domain half-width")->capture_default_str();
  app->add_option("--k-fit", l.k_fit, "neighbors per patch fit")->capture_default_str();
  app->add_option("--ridge", l.ridge, "ridge regularization")->capture_default_str();
  app->add_option("--extent", l.extent, "patch half-width in units of local spacing")
      ->capture_default_str();
  app->add_option("--grid-side", l.grid_side, "side of the parameter sampling lattice")
      ->capture_default_str();
  app->add_flag("--no-normalize", o.no_normalize, "process in input coordinates");
}

void add_gue_options(CLI::App* app, Options& o) {
  app->add_option("--K", o.config.field.k, "neighbors per field query")->capture_default_str();
  app->add_option("--value-weights", o.value_scheme, "uniform | gaussian | idw[:p]")
      ->capture_default_str();
  app->add_option("--grad-weights", o.grad_scheme, "uniform | gaussian | idw[:p]")
      ->capture_default_str();
  app->add_option("--estimator", o.estimator, "p2t | p2p")->capture_default_str();
}

void add_grid_options(CLI::App* app, Options& o) {
  app->add_option("--res", o.config.resolution, "grid cells per axis")->capture_default_str();
  app->add_option("--padding", o.config.padding_cells, "empty cells around the input")
      ->capture_default_str();
}

void add_tau_option(CLI::App* app, Options& o) {
  app->add_option("--tau", o.config.tau, "near-surface threshold")->capture_default_str();
}

// Turns a key=value file into flag tokens for `sub`.
std::vector<std::string> config_tokens(const CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected key=value", line_no);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub.get_option_no_throw(flag);
    if (opt == nullptr || key == "config") {
      throw ParseError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'", line_no);
    }
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value == "yes" || value == "on") tokens.push_back(flag);
    } else {
      tokens.push_back(flag);
      tokens.push_back(value);
    }
  }
  return tokens;
}

// Rewrites args so that a --config file's entries precede the command-line
// flags of the chosen subcommand.
std::vector<std::string> expand_config(const CLI::App& app, const std::vector<std::string>& args) {
  if (args.size() < 2) return args;
  const CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[1]);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::string path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<std::string> out(args.begin(), args.begin() + 2);
  for (auto& t : config_tokens(*sub, path)) out.push_back(std::move(t));
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

PointCloud normalized_copy(const PointCloud& cloud, const Normalization& norm) {
  std::vector<Point3> pts;
  pts.reserve(cloud.size());
  for (const auto& p : cloud.points()) pts.push_back(norm.apply(p));
  return PointCloud(std::move(pts));
}

// ---- subcommands -------------------------------------------------------------

int run_gen(Options& o, std::ostream& out) {
  const AnalyticShape shape = parse_shape(o.shape);
  const SurfaceSamples s = sample_shape_surface(shape, o.n, o.config.seed);
  write_point_cloud(o.out, s.points.points(), o.normals ? s.normals : std::vector<Vec3>{});
  out << "points=" << s.points.size() << '\n';
  return 0;
}

int run_upsample(Options& o, std::ostream& out) {
  o.finalize();
  o.config.patch.validate();
  const PointCloud cloud = read_point_cloud(o.in);
  const Normalization norm = choose_normalization(cloud, o.config);
  UpsampleResult r = upsample(normalized_copy(cloud, norm), o.config.patch, o.config.threads);
  for (auto& p : r.dense.points) p = norm.invert(p);
  write_point_cloud(o.out, r.dense.points, r.dense.normals);
  out << "points=" << r.dense.size() << '\n' << "linear_fallbacks=" << r.linear_fallbacks << '\n';
  return 0;
}

void report_grid(const UdfGrid& grid, std::ostream& out) {
  std::size_t ambiguous = 0;
  for (auto a : grid.ambiguous) ambiguous += a ? 1 : 0;
  out << "resolution=" << grid.resolution << '\n'
      << "lattice_vertices=" << grid.vertex_count() << '\n'
      << "ambiguous_vertices=" << ambiguous << '\n';
}

int run_udf(Options& o, std::ostream& out) {
  o.finalize();
  const PointCloud cloud = read_point_cloud(o.in);
  const FieldStage st = compute_field(cloud, o.config);
  dump_udf_grid(st.grid, o.out);
  write_normalization(st.normalization, normalization_sidecar(o.out));
  out << "dense_points=" << st.upsampled.dense.size() << '\n'
      << "linear_fallbacks=" << st.upsampled.linear_fallbacks << '\n';
  report_grid(st.grid, out);
  return 0;
}

void report_mesh(const TriangleMesh& mesh, const ExtractionStats& stats, std::ostream& out) {
  out << "vertices=" << mesh.vertices.size() << '\n'
      << "triangles=" << mesh.triangles.size() << '\n'
      << "active_cubes=" << stats.active_cubes << '\n'
      << "nonzero_cost_cubes=" << stats.nonzero_cost_cubes << '\n';
}

int run_reconstruct(Options& o, std::ostream& out) {
  o.finalize();
  const PointCloud cloud = read_point_cloud(o.in);
  const PipelineResult r = reconstruct(cloud, o.config);
  write_mesh(r.mesh, o.out);
  if (!o.grid_out.empty()) {
    dump_udf_grid(r.field.grid, o.grid_out);
    write_normalization(r.field.normalization, normalization_sidecar(o.grid_out));
  }
  if (!o.dense_out.empty()) {
    std::vector<Point3> pts;
    pts.reserve(r.field.upsampled.dense.size());
    for (const auto& p : r.field.upsampled.dense.points) pts.push_back(r.field.normalization.invert(p));
    write_point_cloud(o.dense_out, pts, r.field.upsampled.dense.normals);
  }
  out << "dense_points=" << r.field.upsampled.dense.size() << '\n'
      << "linear_fallbacks=" << r.field.upsampled.linear_fallbacks << '\n';
  report_mesh(r.mesh, r.stats, out);
  return 0;
}

int run_emc(Options& o, std::ostream& out) {
  if (!(o.config.tau >= 0.0)) throw InvalidArgument("tau must be >= 0");
  const UdfGrid grid = load_udf_grid(o.in);
  Normalization norm;
  if (!o.no_denormalize) {
    const std::string side = o.xform.empty() ? normalization_sidecar(o.in) : o.xform;
    if (!o.xform.empty() || std::filesystem::exists(side)) norm = read_normalization(side);
  }
  ExtractionStats stats;
  const TriangleMesh mesh = extract_and_denormalize(grid, o.config.tau, norm, o.config.threads, &stats);
  write_mesh(mesh, o.out);
  report_mesh(mesh, stats, out);
  return 0;
}

// Points to compare: surface samples for meshes, the points themselves for clouds.
PointCloud eval_points(const std::string& path, std::size_t n, std::uint64_t seed,
                       std::optional<TriangleMesh>& mesh_out) {
  if (file_has_faces(path)) {
    mesh_out = read_mesh(path);
    return sample_mesh_surface(*mesh_out, n, seed);
  }
  return read_point_cloud(path);
}

int run_eval(Options& o, std::ostream& out) {
  if (o.eps.empty()) throw InvalidArgument("at least one --eps is required");
  nlohmann::ordered_json report;
  std::vector<std::pair<std::string, std::string>> lines;
  auto put = [&](const std::string& key, auto value) {
    report[key] = value;
    if constexpr (std::is_floating_point_v<decltype(value)>) {
      lines.emplace_back(key, format_double(value));
    } else {
      lines.emplace_back(key, std::to_string(value));
    }
  };

  std::optional<TriangleMesh> rec_mesh, gt_mesh;
  const PointCloud rec = eval_points(o.rec, o.eval_n, o.config.seed, rec_mesh);
  std::optional<AnalyticShape> shape;
  PointCloud gt;
  if (!o.gt_shape.empty()) {
    shape = parse_shape(o.gt_shape);
    gt = sample_shape_surface(*shape, o.eval_n, o.config.seed + 1).points;
  } else {
    gt = eval_points(o.gt, o.eval_n, o.config.seed + 1, gt_mesh);
  }

  const double cd = chamfer_distance(rec, gt, o.config.threads);
  put("cd", cd);
  put("cd_x100", cd * 100.0);
  const auto scores = f_scores(rec, gt, o.eps, o.config.threads);
  for (std::size_t i = 0; i < o.eps.size(); ++i) {
    const std::string tag = format_double(o.eps[i]);
    put("f1_" + tag, scores[i].f);
    put("precision_" + tag, scores[i].precision);
    put("recall_" + tag, scores[i].recall);
  }
  if (rec_mesh) {
    const MeshStats st = mesh_diagnostics(*rec_mesh);
    put("vertices", st.vertex_count);
    put("triangles", st.triangle_count);
    put("boundary_edges", st.boundary_edges);
    put("nonmanifold_edges", st.nonmanifold_edges);
    put("euler", st.euler);
    put("components", st.components.size());
    put("degenerate_triangles", st.degenerate_triangles);
  }
  if (!o.udf_cloud.empty()) {
    if (!shape && !gt_mesh) throw InvalidArgument("--udf-cloud needs a ground-truth shape or mesh");
    o.finalize();
    CloudData dense = read_cloud_data(o.udf_cloud);
    if (dense.normals.empty()) throw InvalidArgument("--udf-cloud file carries no normals");
    OrientedPointCloud oc;
    oc.points = std::move(dense.points);
    oc.normals = std::move(dense.normals);
    oc.source_index.resize(oc.points.size());
    for (std::size_t i = 0; i < oc.source_index.size(); ++i) {
      oc.source_index[i] = static_cast<std::uint32_t>(i);
    }
    const DistanceField field(std::move(oc), o.config.field);
    const FieldOracle oracle =
        shape ? FieldOracle::from_shape(*shape) : FieldOracle::from_mesh(*gt_mesh);
    const UdfError e = udf_error_protocol(field, oracle, 64, {}, o.config.threads);
    put("udf_mae", e.mae);
    put("grad_angle_mean_deg", e.grad_angle_mean_deg);
    put("udf_band_vertices", e.value_count);
  }

  for (const auto& [k, v] : lines) out << k << '=' << v << '\n';
  if (!o.json.empty()) {
    std::ofstream js(o.json);
    if (!js) throw Error("cannot open for writing: " + o.json);
    js << report.dump(2) << '\n';
    if (!js) throw Error("write failed: " + o.json);
  }
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Surface reconstruction from unoriented point clouds via unsigned distance fields",
               "udfmesh"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "sample an analytic shape into a point cloud");
  gen->add_option("--shape", o.shape, "sphere:r | torus:R:r | plane:nx:ny:nz:d | box:hx:hy:hz | disk:r")
      ->required();
  gen->add_option("--n", o.n, "number of points")->capture_default_str();
  gen->add_option("--seed", o.config.seed, "random seed")->capture_default_str();
  gen->add_option("--out", o.out, "output .xyz or .ply")->required();
  gen->add_flag("--normals", o.normals, "also write true normals");
  add_config_option(gen, o);

  auto* up = app.add_subcommand("upsample", "densify a cloud into oriented samples");
  up->add_option("--in", o.in, "input .xyz or .ply")->required();
  up->add_option("--out", o.out, "output .ply or .xyz with normals")->required();
  add_lgr_options(up, o);
  add_threads_option(up, o);
  add_config_option(up, o);

  auto* udf = app.add_subcommand("udf", "estimate the distance field on a grid");
  udf->add_option("--in", o.in, "input .xyz or .ply")->required();
  udf->add_option("--out", o.out, "output grid dump")->required();
  add_lgr_options(udf, o);
  add_gue_options(udf, o);
  add_grid_options(udf, o);
  add_threads_option(udf, o);
  add_config_option(udf, o);

  auto* rec = app.add_subcommand("reconstruct", "point cloud to mesh");
  rec->add_option("--in", o.in, "input .xyz or .ply")->required();
  rec->add_option("--out", o.out, "output .obj or .ply")->required();
  rec->add_option("--grid-out", o.grid_out, "also dump the field grid");
  rec->add_option("--dense-out", o.dense_out, "also write the densified cloud");
  add_lgr_options(rec, o);
  add_gue_options(rec, o);
  add_grid_options(rec, o);
  add_tau_option(rec, o);
  add_threads_option(rec, o);
  add_config_option(rec, o);

  auto* emc = app.add_subcommand("emc", "extract a mesh from a grid dump");
  emc->add_option("--grid", o.in, "input grid dump")->required();
  emc->add_option("--out", o.out, "output .obj or .ply")->required();
  emc->add_option("--xform", o.xform, "normalization file (default: <grid>.xform if present)");
  emc->add_flag("--no-denormalize", o.no_denormalize, "keep grid coordinates");
  add_tau_option(emc, o);
  add_threads_option(emc, o);
  add_config_option(emc, o);

  auto* ev = app.add_subcommand("eval", "compare a reconstruction against ground truth");
  ev->add_option("--rec", o.rec, "reconstructed mesh or cloud")->required();
  auto* gt_opt = ev->add_option("--gt", o.gt, "ground-truth mesh or cloud");
  auto* shape_opt = ev->add_option("--gt-shape", o.gt_shape, "analytic ground truth, as for gen");
  gt_opt->excludes(shape_opt);
  ev->add_option("--eps", o.eps, "f-score thresholds")->capture_default_str()->expected(1, -1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  ev->add_option("--n", o.eval_n, "surface samples per side")->capture_default_str();
  ev->add_option("--seed", o.config.seed, "random seed")->capture_default_str();
  ev->add_option("--json", o.json, "also write the report as JSON");
  ev->add_option("--udf-cloud", o.udf_cloud, "dense oriented cloud for field error");
  add_gue_options(ev, o);
  add_threads_option(ev, o);
  add_config_option(ev, o);

  try {
    std::vector<std::string> args = expand_config(app, args_in);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(std::move(reversed));
    if (ev->parsed() && o.gt.empty() && o.gt_shape.empty()) {
      throw CLI::RequiredError("--gt or --gt-shape");
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (gen->parsed()) return run_gen(o, out);
    if (up->parsed()) return run_upsample(o, out);
    if (udf->parsed()) return run_udf(o, out);
    if (rec->parsed()) return run_reconstruct(o, out);
    if (emc->parsed()) return run_emc(o, out);
    if (ev->parsed()) return run_eval(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace udfmesh
