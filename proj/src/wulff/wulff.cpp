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

#include "aniso/wulff.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace aniso {

namespace {

// Orders the vertices of a convex facet counterclockwise about its outward normal.
std::vector<int> order_facet(const std::vector<Vec>& verts, std::vector<int> ids,
                             const Vec& n) {
  Vec c = Vec::Zero(n.size());
  for (int i : ids) c += verts[i];
  c /= static_cast<double>(ids.size());
  if (n.size() == 2) {
    Vec t = make_vec({-n[1], n[0]});
    std::sort(ids.begin(), ids.end(),
              [&](int a, int b) { return t.dot(verts[a]) < t.dot(verts[b]); });
    return ids;
  }
  Mat tb = tangent_basis(n);
  Vec t1 = tb.col(0);
  Vec t2 = cross3(n, t1);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    Vec da = verts[a] - c, db = verts[b] - c;
    return std::atan2(t2.dot(da), t1.dot(da)) < std::atan2(t2.dot(db), t1.dot(db));
  });
  return ids;
}

Polytope assemble(int dim, std::vector<Vec> verts, std::vector<Halfspace> hs) {
  Polytope p;
  p.dim = dim;
  p.vertices = std::move(verts);
  p.halfspaces = std::move(hs);
  for (const Halfspace& h : p.halfspaces) {
    std::vector<int> ids;
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
      if (std::abs(h.normal.dot(p.vertices[i]) - h.offset) <= 1e-12 * std::max(1.0, h.offset)) {
        ids.push_back(static_cast<int>(i));
      }
    }
    p.faces.push_back(order_facet(p.vertices, std::move(ids), h.normal));
  }
  return p;
}

}  // namespace

bool Polytope::contains(const Vec& x, double slack) const {
  for (const Halfspace& h : halfspaces) {
    if (h.normal.dot(x) > h.offset + slack) return false;
  }
  return true;
}

double Polytope::facet_area(std::size_t i) const {
  const auto& f = faces[i];
  if (dim == 2) return (vertices[f[1]] - vertices[f[0]]).norm();
  Vec acc = Vec::Zero(3);
  for (std::size_t k = 1; k + 1 < f.size(); ++k) {
    acc += cross3(vertices[f[k]] - vertices[f[0]], vertices[f[k + 1]] - vertices[f[0]]);
  }
  return 0.5 * acc.norm();
}

double Polytope::volume() const {
  double v = 0.0;
  for (std::size_t i = 0; i < faces.size(); ++i) v += facet_area(i) * halfspaces[i].offset;
  return v / dim;
}

double Polytope::perimeter(const Norm& phi) const {
  double p = 0.0;
  for (std::size_t i = 0; i < faces.size(); ++i) p += facet_area(i) * phi.eval(halfspaces[i].normal);
  return p;
}

TriSurface Polytope::surface() const {
  TriSurface s;
  s.dim = dim;
  s.vertices = vertices;
  for (const auto& f : faces) {
    if (dim == 2) {
      s.faces.push_back({f[0], f[1], -1});
    } else {
      for (std::size_t k = 1; k + 1 < f.size(); ++k) s.faces.push_back({f[0], f[k], f[k + 1]});
    }
  }
  compute_vertex_normals(&s);
  return s;
}

Polytope crystalline_polytope(const Norm& phi, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::kInvalidArgument, "radius must be positive");
  const int n = phi.dim();
  std::vector<Vec> verts;
  std::vector<Halfspace> hs;
  if (phi.family() == NormFamily::kL1) {
    // phi° = linf: the cube [-r, r]^n.
    for (int mask = 0; mask < (1 << n); ++mask) {
      Vec v(n);
      for (int i = 0; i < n; ++i) v[i] = (mask >> i & 1) ? r : -r;
      verts.push_back(v);
    }
    for (int i = 0; i < n; ++i) {
      hs.push_back({unit_vec(n, i), r});
      hs.push_back({-unit_vec(n, i), r});
    }
  } else if (phi.family() == NormFamily::kLinf) {
    // phi° = l1: the cross-polytope with vertices +-r e_i.
    for (int i = 0; i < n; ++i) {
      verts.push_back(r * unit_vec(n, i));
      verts.push_back(-r * unit_vec(n, i));
    }
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int mask = 0; mask < (1 << n); ++mask) {
      Vec v(n);
      for (int i = 0; i < n; ++i) v[i] = (mask >> i & 1) ? s : -s;
      hs.push_back({v, r * s});
    }
  } else {
    throw Error(ErrorCode::kUnsupportedOperation,
                std::string("no polytope for norm family ") + to_string(phi.family()));
  }
  return assemble(n, std::move(verts), std::move(hs));
}

int default_resolution(int dim) { return dim == 3 ? kDefaultSphereLevel : kDefaultCircleCount; }

WulffShape::WulffShape(Norm phi, double r) : norm_(phi), dual_(phi), radius_(r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::kInvalidArgument, "Wulff radius must be positive and finite");
  }
}

bool WulffShape::contains(const Vec& x, double slack) const {
  return dual_.eval(x) <= radius_ + slack;
}

TriSurface WulffShape::boundary_mesh(int resolution) const {
  if (norm_.is_crystalline()) {
    throw Error(ErrorCode::kUnsupportedOperation,
                "crystalline Wulff shapes are polytopes; use polytope()");
  }
  if (!norm_.is_strictly_convex() || norm_.family() == NormFamily::kSampled) {
    throw Error(ErrorCode::kUnsupportedOperation,
                "boundary mesh needs a C^1 strictly convex norm");
  }
  if (resolution <= 0) resolution = default_resolution(dim());
  TriSurface s = unit_sphere(dim(), resolution);
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    s.vertices[i] = radius_ * norm_.grad(s.normals[i]);
  }
  return s;
}

Polytope WulffShape::polytope() const { return crystalline_polytope(norm_, radius_); }

VolumeEstimate monte_carlo_volume(const std::function<bool(const Vec&)>& inside,
                                  const Vec& lo, const Vec& hi, std::int64_t samples,
                                  std::uint64_t seed) {
  if (samples <= 0) throw Error(ErrorCode::kInvalidArgument, "sample count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Index n = lo.size();
  const Vec span = hi - lo;
  const double box = span.prod();
  std::int64_t hits = 0;
  Vec x(n);
  for (std::int64_t k = 0; k < samples; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) x[i] = lo[i] + span[i] * unit(rng);
    hits += inside(x);
  }
  const double f = static_cast<double>(hits) / samples;
  return {box * f, box * std::sqrt(f * (1.0 - f) / samples)};
}

VolumeEstimate wulff_volume(const WulffShape& w, const VolumeOptions& options) {
  if (w.is_crystalline()) return {w.polytope().volume(), 0.0};
  if (options.method == VolumeMethod::kMeshDivergence) {
    return {enclosed_volume(w.boundary_mesh(options.resolution)), 0.0};
  }
  // x_i <= phi°(x) phi(e_i) bounds W_r by the box |x_i| <= r phi(e_i).
  const int n = w.dim();
  Vec hi(n);
  for (int i = 0; i < n; ++i) {
    hi[i] = w.radius() * std::max(w.norm().eval(unit_vec(n, i)), w.norm().eval(-unit_vec(n, i)));
  }
  return monte_carlo_volume([&](const Vec& x) { return w.contains(x); }, -hi, hi,
                            options.samples, options.seed);
}

double wulff_perimeter(const WulffShape& w, int resolution) {
  if (w.is_crystalline()) return w.polytope().perimeter(w.norm());
  return aniso_area(w.boundary_mesh(resolution), w.norm());
}

}  // namespace aniso
