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

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "aniso/mesh.hpp"

namespace aniso {

namespace {

using Mat2 = Eigen::Matrix2d;

std::vector<std::vector<int>> one_rings(const TriSurface& s) {
  std::vector<std::vector<int>> ring(s.vertices.size());
  for (const auto& t : s.faces) {
    for (int j = 0; j < 3; ++j) {
      ring[t[j]].push_back(t[(j + 1) % 3]);
      ring[t[j]].push_back(t[(j + 2) % 3]);
    }
  }
  for (auto& r : ring) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  return ring;
}

std::vector<int> two_ring(const std::vector<std::vector<int>>& ring, int v,
                          std::vector<int>* mark, int stamp) {
  std::vector<int> out;
  (*mark)[v] = stamp;
  for (int a : ring[v]) {
    if ((*mark)[a] != stamp) {
      (*mark)[a] = stamp;
      out.push_back(a);
    }
    for (int b : ring[a]) {
      if ((*mark)[b] != stamp) {
        (*mark)[b] = stamp;
        out.push_back(b);
      }
    }
  }
  return out;
}

struct VertexCurvature {
  Vec kappa;
  Vec normal;
  bool ok = false;
};

// Cubic height-function jet over the tangent plane of the stored normal,
// fitted to neighbour positions and to the slopes implied by their normals.
VertexCurvature fit_vertex(const TriSurface& s, const Norm& phi, int v,
                           const std::vector<int>& nbrs) {
  VertexCurvature out;
  const Vec& p = s.vertices[v];
  const Vec& nu0 = s.normals[v];
  Mat t = tangent_basis(nu0);
  const int m = static_cast<int>(nbrs.size());
  if (m < 3) return out;
  constexpr int kCols = 9;
  std::vector<Eigen::Vector3d> local(m), normal(m);
  double scale = 0.0;
  for (int k = 0; k < m; ++k) {
    Vec d = s.vertices[nbrs[k]] - p;
    const Vec& n = s.normals[nbrs[k]];
    local[k] = Eigen::Vector3d(t.col(0).dot(d), t.col(1).dot(d), nu0.dot(d));
    normal[k] = Eigen::Vector3d(t.col(0).dot(n), t.col(1).dot(n), nu0.dot(n));
    scale += std::hypot(local[k][0], local[k][1]);
  }
  scale /= m;
  if (!(scale > 0.0)) return out;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * m + 2, kCols);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(3 * m + 2);
  int row = 0;
  for (int k = 0; k < m; ++k) {
    const double x = local[k][0] / scale, y = local[k][1] / scale;
    const double f[kCols] = {x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y};
    for (int c = 0; c < kCols; ++c) a(row, c) = f[c];
    z[row++] = local[k][2] / scale;
    if (normal[k][2] < 0.5) continue;
    const double fx[kCols] = {1, 0, 2 * x, y, 0, 3 * x * x, 2 * x * y, y * y, 0};
    const double fy[kCols] = {0, 1, 0, x, 2 * y, 0, x * x, 2 * x * y, 3 * y * y};
    for (int c = 0; c < kCols; ++c) {
      a(row, c) = fx[c];
      a(row + 1, c) = fy[c];
    }
    z[row++] = -normal[k][0] / normal[k][2];
    z[row++] = -normal[k][1] / normal[k][2];
  }
  a(row, 0) = 1.0;
  a(row + 1, 1) = 1.0;
  row += 2;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.topRows(row));
  qr.setThreshold(1e-10);
  if (qr.rank() < kCols) return out;
  Eigen::VectorXd c = qr.solve(z.head(row));
  const double d = c[0], e = c[1];
  const double fxx = 2.0 * c[2] / scale, fxy = c[3] / scale, fyy = 2.0 * c[4] / scale;

  Mat frame(3, 2);
  frame.col(0) = t.col(0) + d * nu0;
  frame.col(1) = t.col(1) + e * nu0;
  Vec nu = (nu0 - d * t.col(0) - e * t.col(1)).normalized();
  Mat2 first = (frame.transpose() * frame);
  Mat2 second;
  second << fxx, fxy, fxy, fyy;
  second /= std::sqrt(1.0 + d * d + e * e);
  Mat2 first_inv = first.inverse();
  Mat2 shape = -first_inv * second;
  Mat hp = phi.hess(nu);
  Mat2 metric = frame.transpose() * hp * frame;
  Mat2 op = first_inv * metric * shape;
  const double half = 0.5 * op.trace();
  const double disc = std::max(0.0, half * half - op.determinant());
  out.kappa = make_vec({half - std::sqrt(disc), half + std::sqrt(disc)});
  out.normal = nu;
  out.ok = std::isfinite(out.kappa[0]) && std::isfinite(out.kappa[1]);
  return out;
}

CurvatureField curvature_2d(const TriSurface& s, const Norm& phi) {
  const std::size_t n = s.vertices.size();
  std::vector<int> prev(n, -1), next(n, -1);
  for (const auto& f : s.faces) {
    next[f[0]] = f[1];
    prev[f[1]] = f[0];
  }
  CurvatureField out;
  out.dim = 2;
  out.kappa.resize(n);
  out.mean.resize(n);
  out.mean_vector.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (prev[i] < 0 || next[i] < 0) {
      throw Error(ErrorCode::kInvalidMesh, "vertex is not on a closed polyline");
    }
    const Vec& a = s.vertices[prev[i]];
    const Vec& b = s.vertices[i];
    const Vec& c = s.vertices[next[i]];
    Vec u = b - a, w = c - b, chord = c - a;
    const double cr = u[0] * w[1] - u[1] * w[0];
    const double k = 2.0 * cr / (u.norm() * w.norm() * chord.norm());
    Vec tan = chord.normalized();
    Vec nu = make_vec({tan[1], -tan[0]});
    const double kp = k * tan.dot(phi.hess(nu) * tan);
    out.kappa[i] = make_vec({kp});
    out.mean[i] = kp;
    out.mean_vector[i] = kp * nu;
  }
  return out;
}

}  // namespace

CurvatureField curvature(const TriSurface& s, const Norm& phi) {
  if (!phi.is_smooth()) {
    throw Error(ErrorCode::kUnsupportedOperation, "curvature needs a C^2 norm");
  }
  if (s.normals.size() != s.vertices.size()) {
    throw Error(ErrorCode::kInvalidMesh, "one normal per vertex required");
  }
  if (s.dim == 2) return curvature_2d(s, phi);

  const std::size_t n = s.vertices.size();
  auto ring = one_rings(s);
  std::vector<int> mark(n, -1);
  CurvatureField out;
  out.dim = 3;
  out.kappa.resize(n);
  out.mean.resize(n);
  out.mean_vector.resize(n);
  std::vector<char> ok(n, 0);
  std::vector<Vec> normal(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int v = static_cast<int>(i);
    VertexCurvature c = fit_vertex(s, phi, v, ring[i]);
    if (!c.ok) c = fit_vertex(s, phi, v, two_ring(ring, v, &mark, v));
    if (!c.ok) continue;
    ok[i] = 1;
    out.kappa[i] = c.kappa;
    normal[i] = c.normal;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!ok[i]) {
      ++out.flagged;
      Vec acc = Vec::Zero(2);
      int count = 0;
      for (int a : ring[i]) {
        if (ok[a]) {
          acc += out.kappa[a];
          ++count;
        }
      }
      out.kappa[i] = count ? Vec(acc / count) : Vec(Vec::Zero(2));
      normal[i] = s.normals[i];
    }
    out.mean[i] = out.kappa[i].sum();
    out.mean_vector[i] = out.mean[i] * normal[i];
  }
  return out;
}

}  // namespace aniso
