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
#include <map>
#include <unordered_map>

#include "aniso/mesh.hpp"

namespace aniso {

namespace {

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

// Area-weighted normal: |result| = face area.
Vec weighted_normal(const TriSurface& s, std::size_t f) {
  const auto& t = s.faces[f];
  const Vec& a = s.vertices[t[0]];
  const Vec& b = s.vertices[t[1]];
  if (s.dim == 2) {
    Vec d = b - a;
    return make_vec({d[1], -d[0]});
  }
  return 0.5 * cross3(b - a, s.vertices[t[2]] - a);
}

double bbox_diag2(const TriSurface& s) {
  if (s.vertices.empty()) return 0.0;
  Vec lo = s.vertices[0], hi = s.vertices[0];
  for (const Vec& v : s.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).squaredNorm();
}

}  // namespace

void validate(const TriSurface& s) {
  if (s.dim != 2 && s.dim != 3) {
    throw Error(ErrorCode::kInvalidMesh, "mesh dimension must be 2 or 3");
  }
  const int n = static_cast<int>(s.vertices.size());
  if (s.faces.empty() || n == 0) throw Error(ErrorCode::kInvalidMesh, "empty mesh");
  if (s.normals.size() != s.vertices.size()) {
    throw Error(ErrorCode::kInvalidMesh, "one normal per vertex required");
  }
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    if (s.vertices[i].size() != s.dim || !all_finite(s.vertices[i])) {
      throw Error(ErrorCode::kInvalidMesh, "bad vertex " + std::to_string(i));
    }
    if (s.normals[i].size() != s.dim || !all_finite(s.normals[i]) ||
        std::abs(s.normals[i].norm() - 1.0) > 1e-10) {
      throw Error(ErrorCode::kInvalidMesh, "normal is not unit at vertex " + std::to_string(i));
    }
  }
  const int k = s.face_size();
  for (const auto& t : s.faces) {
    for (int j = 0; j < k; ++j) {
      if (t[j] < 0 || t[j] >= n) throw Error(ErrorCode::kInvalidMesh, "face index out of range");
    }
  }
  if (s.dim == 2) {
    std::vector<int> starts(n, 0), ends(n, 0);
    for (const auto& t : s.faces) {
      ++starts[t[0]];
      ++ends[t[1]];
    }
    for (int i = 0; i < n; ++i) {
      if (starts[i] != 1 || ends[i] != 1) {
        throw Error(ErrorCode::kInvalidMesh, "polyline is not closed at vertex " + std::to_string(i));
      }
    }
    return;
  }
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(s.faces.size() * 3);
  auto key = [](int a, int b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  };
  for (const auto& t : s.faces) {
    for (int j = 0; j < 3; ++j) {
      if (++directed[key(t[j], t[(j + 1) % 3])] > 1) {
        throw Error(ErrorCode::kInvalidMesh, "edge used twice in the same direction");
      }
    }
  }
  for (const auto& [e, count] : directed) {
    const int a = static_cast<int>(e >> 32), b = static_cast<int>(e & 0xffffffffu);
    if (!directed.count(key(b, a))) {
      throw Error(ErrorCode::kInvalidMesh, "boundary edge " + std::to_string(a) + "-" +
                                               std::to_string(b));
    }
  }
}

Vec face_normal(const TriSurface& s, std::size_t f) {
  Vec w = weighted_normal(s, f);
  const double a = w.norm();
  if (!(a > 0.0)) throw Error(ErrorCode::kInvalidMesh, "zero-area face");
  return w / a;
}

double face_area(const TriSurface& s, std::size_t f) {
  return weighted_normal(s, f).norm();
}

std::vector<double> vertex_areas(const TriSurface& s) {
  std::vector<double> out(s.vertices.size(), 0.0);
  const double share = 1.0 / s.face_size();
  for (std::size_t f = 0; f < s.faces.size(); ++f) {
    const double a = face_area(s, f) * share;
    for (int j = 0; j < s.face_size(); ++j) out[s.faces[f][j]] += a;
  }
  return out;
}

void compute_vertex_normals(TriSurface* s) {
  std::vector<Vec> acc(s->vertices.size(), Vec::Zero(s->dim));
  for (std::size_t f = 0; f < s->faces.size(); ++f) {
    Vec w = weighted_normal(*s, f);
    for (int j = 0; j < s->face_size(); ++j) acc[s->faces[f][j]] += w;
  }
  for (Vec& v : acc) v.normalize();
  s->normals = std::move(acc);
}

TriSurface translated(TriSurface s, const Vec& offset) {
  for (Vec& v : s.vertices) v += offset;
  return s;
}

TriSurface scaled(TriSurface s, double t) {
  for (Vec& v : s.vertices) v *= t;
  if (t < 0) {
    for (Vec& n : s.normals) n = -n;
    for (auto& f : s.faces) std::swap(f[0], f[1]);
  }
  return s;
}

TriSurface combine(const TriSurface& a, const TriSurface& b) {
  if (a.dim != b.dim) throw Error(ErrorCode::kInvalidArgument, "dimension mismatch");
  TriSurface out = a;
  const int shift = static_cast<int>(a.vertices.size());
  out.vertices.insert(out.vertices.end(), b.vertices.begin(), b.vertices.end());
  out.normals.insert(out.normals.end(), b.normals.begin(), b.normals.end());
  for (auto f : b.faces) {
    for (int j = 0; j < b.face_size(); ++j) f[j] += shift;
    out.faces.push_back(f);
  }
  out.resolution = std::min(a.resolution, b.resolution);
  return out;
}

TriSurface icosphere(int level) {
  if (level < 0 || level > 9) {
    throw Error(ErrorCode::kInvalidArgument, "icosphere level must be in [0, 9]");
  }
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec> v = {
      make_vec({-1, t, 0}), make_vec({1, t, 0}),   make_vec({-1, -t, 0}), make_vec({1, -t, 0}),
      make_vec({0, -1, t}), make_vec({0, 1, t}),   make_vec({0, -1, -t}), make_vec({0, 1, -t}),
      make_vec({t, 0, -1}), make_vec({t, 0, 1}),   make_vec({-t, 0, -1}), make_vec({-t, 0, 1})};
  for (Vec& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]);
      const int b = midpoint(tri[1], tri[2]);
      const int c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  TriSurface s;
  s.dim = 3;
  s.vertices = v;
  s.normals = v;
  s.faces = std::move(f);
  s.resolution = level;
  return s;
}

TriSurface circle_polygon(int count) {
  if (count < 3) throw Error(ErrorCode::kInvalidArgument, "polygon needs 3 or more vertices");
  TriSurface s;
  s.dim = 2;
  for (int k = 0; k < count; ++k) {
    const double a = 2.0 * kPi * k / count;
    s.vertices.push_back(make_vec({std::cos(a), std::sin(a)}));
    s.faces.push_back({k, (k + 1) % count, -1});
  }
  s.normals = s.vertices;
  s.resolution = count;
  return s;
}

TriSurface unit_sphere(int dim, int resolution) {
  if (dim == 3) return icosphere(resolution);
  if (dim == 2) return circle_polygon(resolution);
  throw Error(ErrorCode::kInvalidArgument, "dimension must be 2 or 3");
}

double aniso_area(const TriSurface& s, const Norm& phi, int* degenerate) {
  const double floor = 1e-14 * bbox_diag2(s);
  double total = 0.0;
  int skipped = 0;
  for (std::size_t f = 0; f < s.faces.size(); ++f) {
    Vec w = weighted_normal(s, f);
    const double a = w.norm();
    if (std::isnan(a)) throw Error(ErrorCode::kInvalidMesh, "NaN face normal");
    if (a < (s.dim == 3 ? floor : std::sqrt(floor))) {
      ++skipped;
      continue;
    }
    total += phi.eval(w);
  }
  if (degenerate) *degenerate = skipped;
  return total;
}

double area(const TriSurface& s) { return aniso_area(s, Norm::euclidean(s.dim)); }

double enclosed_volume(const TriSurface& s) {
  double v = 0.0;
  for (const auto& t : s.faces) {
    const Vec& a = s.vertices[t[0]];
    const Vec& b = s.vertices[t[1]];
    if (s.dim == 2) {
      v += cross2(a, b) / 2.0;
    } else {
      v += a.dot(cross3(b, s.vertices[t[2]])) / 6.0;
    }
  }
  if (v < 0.0) throw Error(ErrorCode::kOrientation, "negative enclosed volume");
  return v;
}

std::vector<Vec> aniso_normal(const TriSurface& s, const Norm& phi) {
  std::vector<Vec> out;
  out.reserve(s.normals.size());
  for (const Vec& n : s.normals) out.push_back(phi.grad(n));
  return out;
}

double lp_deviation(const CurvatureField& f, const TriSurface& s, double lambda,
                    double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::kInvalidArgument, "p must be >= 1");
  if (f.mean.size() != s.vertices.size()) {
    throw Error(ErrorCode::kInvalidArgument, "curvature field does not match mesh");
  }
  const std::vector<double> w = vertex_areas(s);
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] * std::pow(std::abs(f.mean[i] - lambda), p);
  }
  return std::pow(acc, 1.0 / p);
}

double first_variation(const TriSurface& s, const Norm& phi,
                       const std::vector<Mat>& jacobians) {
  if (jacobians.size() != s.vertices.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one Jacobian per vertex required");
  }
  const int n = s.dim;
  const double share = 1.0 / s.face_size();
  double total = 0.0;
  for (std::size_t f = 0; f < s.faces.size(); ++f) {
    Vec w = weighted_normal(s, f);
    const double a = w.norm();
    if (!(a > 0.0)) continue;
    Vec nu = w / a;
    Mat dg = Mat::Zero(n, n);
    for (int j = 0; j < s.face_size(); ++j) {
      const Mat& jac = jacobians[s.faces[f][j]];
      if (jac.rows() != n || jac.cols() != n) {
        throw Error(ErrorCode::kInvalidArgument, "Jacobian has the wrong shape");
      }
      dg += share * jac;
    }
    Mat b = phi.eval(nu) * Mat::Identity(n, n) - nu * phi.subgradient(nu).transpose();
    total += a * dg.cwiseProduct(b).sum();
  }
  return total;
}

std::vector<Mat> identity_jacobians(const TriSurface& s) {
  return std::vector<Mat>(s.vertices.size(), Mat::Identity(s.dim, s.dim));
}

double lambda_of(const TriSurface& s, const Norm& phi) {
  const double v = enclosed_volume(s);
  if (!(v > 0.0)) throw Error(ErrorCode::kInvalidMesh, "zero enclosed volume");
  const int n = s.dim - 1;
  return n * aniso_area(s, phi) / ((n + 1) * v);
}

double circumradius(const TriSurface& s) {
  double r = 0.0;
  for (const Vec& v : s.vertices) r = std::max(r, v.norm());
  return r;
}

}  // namespace aniso
