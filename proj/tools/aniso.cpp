// Copyright 2026 The Aniso Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "aniso/cli.hpp"
#include "aniso/dual_norm.hpp"
#include "aniso/grid.hpp"
#include "aniso/mesh.hpp"
#include "aniso/shapes.hpp"
#include "aniso/wulff.hpp"

using namespace aniso;

namespace {

int run_command(const std::string& path, const std::string& output) {
  RunConfig config;
  try {
    config = load_config(path);
  } catch (const Error& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kExitConfig;
  }
  if (!output.empty()) config.output = output;
  try {
    return run(config, std::cout);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
}

int wulff_command(const std::string& norm_text, double r, int dim, int resolution, const std::string& mesh_path) {
  const Norm phi = parse_norm(norm_text, dim);
  const WulffShape w(phi, r);
  const VerificationReport rep = check_wulff_identity(phi, r, resolution);
  if (rep.status == Status::kError) throw Error(ErrorCode::kInvalidArgument, rep.error);
  std::printf("norm       %s\n", phi.spec().c_str());
  std::printf("radius     %.10g\n", r);
  std::printf("volume     %.10g\n", rep.metrics.at("volume"));
  std::printf("perimeter  %.10g\n", rep.metrics.at("perimeter"));
  std::printf("identity   (n+1)|W| = %.10g, r P(W) = %.10g, rel error %.3g\n", rep.rows[0].measured,
              rep.rows[0].predicted, rep.rows[0].rel_error);
  if (!mesh_path.empty()) {
    write_mesh(mesh_path, w.boundary_mesh(resolution));
    std::printf("mesh       %s\n", mesh_path.c_str());
  }
  return rep.pass() ? kExitPass : kExitFail;
}

int dt_command(const std::string& in, const std::string& norm_text, const std::string& method, int stencil,
               const std::string& out) {
  const VoxelSet s = read_voxels(in);
  const DualNorm dual(parse_norm(norm_text, s.dim()));
  DistanceOptions opt;
  if (method == "chamfer") {
    opt.method = DistanceMethod::kChamfer;
  } else if (method != "seed") {
    throw Error(ErrorCode::kInvalidArgument, "method must be 'seed' or 'chamfer'");
  }
  opt.stencil_order = stencil;
  const DistanceField df = distance_transform(s, dual, opt);
  std::printf("voxels     %llu of %zu\n", static_cast<unsigned long long>(s.count()), s.size());
  std::printf("volume     %.10g\n", volume(s));
  std::printf("max delta  %.10g\n", df.max_value());
  if (df.chamfer_factor > 0) std::printf("chamfer    %.6g\n", df.chamfer_factor);
  if (!out.empty()) {
    write_distance(out, df);
    std::printf("distance   %s\n", out.c_str());
  }
  return kExitPass;
}

int rasterize_command(const std::string& shape_text, const std::string& norm_text, int dim, double spacing,
                      double pad, const std::string& out) {
  const ShapeSpec spec = parse_shape_spec(shape_text, parse_norm(norm_text, dim));
  spec.validate();
  const SetExpr expr = region(spec);
  const Vec margin = Vec::Constant(spec.dim(), pad);
  const VoxelSet s = rasterize(expr, grid_for_box(expr.lower() - margin, expr.upper() + margin, spacing));
  write_voxels(out, s);
  std::printf("voxels     %llu of %zu\n", static_cast<unsigned long long>(s.count()), s.size());
  std::printf("volume     %.10g\n", volume(s));
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic geometry toolkit"};
  app.require_subcommand(1);

  std::string config_path, output;
  auto* run_cmd = app.add_subcommand("run", "Run experiments from a key=value config");
  run_cmd->add_option("config", config_path, "Config file")->required();
  run_cmd->add_option("-o,--output", output, "Override the output directory");

  std::string norm_text = "euclidean", mesh_path;
  double r = 1.0;
  int dim = 3, resolution = 0;
  auto* wulff_cmd = app.add_subcommand("wulff", "Volume, perimeter and identity check of a Wulff shape");
  wulff_cmd->add_option("--norm", norm_text, "Norm spec")->required();
  wulff_cmd->add_option("--r", r, "Radius")->check(CLI::PositiveNumber);
  wulff_cmd->add_option("--dim", dim, "Dimension")->check(CLI::IsMember({2, 3}));
  wulff_cmd->add_option("--resolution", resolution, "Icosphere level or polygon vertex count");
  wulff_cmd->add_option("--mesh", mesh_path, "Write the boundary mesh");

  std::string in_path, method = "seed", out_path;
  int stencil = 1;
  auto* dt_cmd = app.add_subcommand("dt", "Anisotropic distance transform of a voxel file");
  dt_cmd->add_option("--in", in_path, "Voxel file")->required()->check(CLI::ExistingFile);
  dt_cmd->add_option("--norm", norm_text, "Norm spec")->required();
  dt_cmd->add_option("--method", method, "seed or chamfer");
  dt_cmd->add_option("--stencil", stencil, "Chamfer stencil order")->check(CLI::Range(1, 5));
  dt_cmd->add_option("--out", out_path, "Write the distance field");

  std::string shape_text;
  double spacing = 0.02, pad = 0.1;
  auto* ras_cmd = app.add_subcommand("rasterize", "Rasterize a shape spec to a voxel file");
  ras_cmd->add_option("--shape", shape_text, "Shape spec")->required();
  ras_cmd->add_option("--norm", norm_text, "Default norm spec");
  ras_cmd->add_option("--dim", dim, "Dimension")->check(CLI::IsMember({2, 3}));
  ras_cmd->add_option("--spacing", spacing, "Voxel spacing")->check(CLI::PositiveNumber);
  ras_cmd->add_option("--pad", pad, "Padding around the bounding box")->check(CLI::NonNegativeNumber);
  ras_cmd->add_option("--out", out_path, "Voxel file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return run_command(config_path, output);
    if (*wulff_cmd) return wulff_command(norm_text, r, dim, resolution, mesh_path);
    if (*dt_cmd) return dt_command(in_path, norm_text, method, stencil, out_path);
    if (*ras_cmd) return rasterize_command(shape_text, norm_text, dim, spacing, pad, out_path);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
