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

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "aniso/io.hpp"
#include "aniso/mesh.hpp"

namespace aniso {

namespace {

void expect_word(std::istream& in, const char* word) {
  std::string got;
  if (!(in >> got) || got != word) {
    throw Error(ErrorCode::kParse, std::string("mesh: expected '") + word + "', got '" + got + "'");
  }
}

}  // namespace

void write_mesh(std::ostream& out, const TriSurface& s) {
  out << std::setprecision(17);
  out << "dim " << s.dim << "\n";
  out << "resolution " << s.resolution << "\n";
  out << "vertices " << s.vertices.size() << "\n";
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    for (int j = 0; j < s.dim; ++j) out << (j ? " " : "") << s.vertices[i][j];
    for (int j = 0; j < s.dim; ++j) out << " " << s.normals[i][j];
    out << "\n";
  }
  out << "faces " << s.faces.size() << "\n";
  for (const auto& f : s.faces) {
    for (int j = 0; j < s.face_size(); ++j) out << (j ? " " : "") << f[j];
    out << "\n";
  }
}

void write_mesh(const std::string& path, const TriSurface& s) {
  write_file_atomic(path, [&](std::ostream& out) { write_mesh(out, s); });
}

TriSurface read_mesh(std::istream& in) {
  TriSurface s;
  std::size_t nv = 0, nf = 0;
  expect_word(in, "dim");
  if (!(in >> s.dim) || (s.dim != 2 && s.dim != 3)) {
    throw Error(ErrorCode::kParse, "mesh: dimension must be 2 or 3");
  }
  expect_word(in, "resolution");
  in >> s.resolution;
  expect_word(in, "vertices");
  if (!(in >> nv)) throw Error(ErrorCode::kParse, "mesh: bad vertex count");
  s.vertices.assign(nv, Vec::Zero(s.dim));
  s.normals.assign(nv, Vec::Zero(s.dim));
  for (std::size_t i = 0; i < nv; ++i) {
    for (int j = 0; j < s.dim; ++j) in >> s.vertices[i][j];
    for (int j = 0; j < s.dim; ++j) in >> s.normals[i][j];
  }
  if (!in) throw Error(ErrorCode::kParse, "mesh: truncated vertex list");
  expect_word(in, "faces");
  if (!(in >> nf)) throw Error(ErrorCode::kParse, "mesh: bad face count");
  s.faces.assign(nf, {-1, -1, -1});
  for (std::size_t f = 0; f < nf; ++f) {
    for (int j = 0; j < s.dim; ++j) in >> s.faces[f][j];
  }
  if (!in) throw Error(ErrorCode::kParse, "mesh: truncated face list");
  return s;
}

TriSurface read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return read_mesh(in);
}

void write_curvature_csv(std::ostream& out, const CurvatureField& f) {
  out << std::setprecision(12);
  out << "vertex";
  for (int i = 1; i < f.dim; ++i) out << ",kappa" << i;
  out << ",H\n";
  for (std::size_t v = 0; v < f.mean.size(); ++v) {
    out << v;
    for (int i = 0; i < f.kappa[v].size(); ++i) out << "," << f.kappa[v][i];
    out << "," << f.mean[v] << "\n";
  }
}

void write_curvature_csv(const std::string& path, const CurvatureField& f) {
  write_file_atomic(path, [&](std::ostream& out) { write_curvature_csv(out, f); });
}

void write_svg(std::ostream& out, const std::vector<const TriSurface*>& curves, int size) {
  double lo_x = kInf, lo_y = kInf, hi_x = -kInf, hi_y = -kInf;
  for (const TriSurface* c : curves) {
    if (c->dim != 2) throw Error(ErrorCode::kInvalidArgument, "SVG export is 2D only");
    for (const Vec& v : c->vertices) {
      lo_x = std::min(lo_x, v[0]);
      hi_x = std::max(hi_x, v[0]);
      lo_y = std::min(lo_y, v[1]);
      hi_y = std::max(hi_y, v[1]);
    }
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-300});
  const double scale = 0.9 * size / span;
  auto px = [&](const Vec& v) {
    std::ostringstream s;
    s << std::setprecision(6) << 0.05 * size + (v[0] - lo_x) * scale << ","
      << 0.95 * size - (v[1] - lo_y) * scale;
    return s.str();
  };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
      << size << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    out << "<path fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kColors[k % 5]
        << "\" d=\"";
    for (const auto& f : curves[k]->faces) {
      out << "M" << px(curves[k]->vertices[f[0]]) << "L" << px(curves[k]->vertices[f[1]]);
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace aniso
