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

#include "aniso/grid.hpp"
#include "aniso/simd/kernels.hpp"

namespace aniso {

struct SetExpr::Node {
  enum class Kind { kPredicate, kWulff, kPolytope, kSurface, kUnion, kIntersection, kDifference };
  Kind kind = Kind::kPredicate;
  int dim = 3;
  Vec lo, hi;
  Vec offset;  // applied to leaves: x is inside iff x - offset is in the leaf
  Predicate inside;
  std::shared_ptr<const WulffShape> wulff;
  std::shared_ptr<const Polytope> polytope;
  std::shared_ptr<const TriSurface> surface;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = SetExpr::Node;

std::shared_ptr<Node> leaf(Node::Kind kind, int dim, Vec lo, Vec hi, Vec offset) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->dim = dim;
  n->offset = offset.size() == 0 ? Vec(Vec::Zero(dim)) : offset;
  if (n->offset.size() != dim) throw Error(ErrorCode::kInvalidArgument, "offset dimension mismatch");
  n->lo = lo + n->offset;
  n->hi = hi + n->offset;
  return n;
}

std::shared_ptr<const Node> shift(const std::shared_ptr<const Node>& n, const Vec& t) {
  auto m = std::make_shared<Node>(*n);
  m->lo += t;
  m->hi += t;
  if (n->a) {
    m->a = shift(n->a, t);
    m->b = shift(n->b, t);
  } else {
    m->offset += t;
  }
  return m;
}

bool node_contains(const Node& n, const Vec& x) {
  switch (n.kind) {
    case Node::Kind::kUnion:
      return node_contains(*n.a, x) || node_contains(*n.b, x);
    case Node::Kind::kIntersection:
      return node_contains(*n.a, x) && node_contains(*n.b, x);
    case Node::Kind::kDifference:
      return node_contains(*n.a, x) && !node_contains(*n.b, x);
    default:
      break;
  }
  for (int i = 0; i < n.dim; ++i) {
    if (x[i] < n.lo[i] || x[i] > n.hi[i]) return false;
  }
  const Vec y = x - n.offset;
  switch (n.kind) {
    case Node::Kind::kPredicate:
      return n.inside(y);
    case Node::Kind::kWulff:
      return n.wulff->contains(y);
    case Node::Kind::kPolytope:
      return n.polytope->contains(y);
    default: {
      // Parity of crossings of the +x ray, with a tiny transverse jitter.
      const TriSurface& s = *n.surface;
      const double jy = 1.37e-9, jz = 2.41e-9;
      int crossings = 0;
      for (const auto& f : s.faces) {
        if (s.dim == 2) {
          const Vec& p = s.vertices[f[0]];
          const Vec& q = s.vertices[f[1]];
          const double yy = y[1] + jy;
          if ((p[1] > yy) == (q[1] > yy)) continue;
          const double xc = p[0] + (yy - p[1]) * (q[0] - p[0]) / (q[1] - p[1]);
          crossings += xc > y[0];
        } else {
          const Vec& p = s.vertices[f[0]];
          const Vec& q = s.vertices[f[1]];
          const Vec& r = s.vertices[f[2]];
          const double yy = y[1] + jy, zz = y[2] + jz;
          const double d = (q[1] - p[1]) * (r[2] - p[2]) - (r[1] - p[1]) * (q[2] - p[2]);
          if (d == 0) continue;
          const double u = ((yy - p[1]) * (r[2] - p[2]) - (r[1] - p[1]) * (zz - p[2])) / d;
          const double v = ((q[1] - p[1]) * (zz - p[2]) - (yy - p[1]) * (q[2] - p[2])) / d;
          if (u < 0 || v < 0 || u + v > 1) continue;
          crossings += p[0] + u * (q[0] - p[0]) + v * (r[0] - p[0]) > y[0];
        }
      }
      return crossings % 2 == 1;
    }
  }
}

struct RowRange {
  int j0, j1, k0, k1, i0, i1;
};

// Index range of voxels whose centers lie in the node's bounding box.
bool row_range(const Node& n, const GridSpec& g, RowRange& r) {
  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int a = 0; a < g.dim; ++a) {
    lo[a] = std::max(0, static_cast<int>(std::ceil((n.lo[a] - g.origin[a]) / g.spacing - 1e-9)));
    hi[a] = std::min(g.dims[a] - 1,
                     static_cast<int>(std::floor((n.hi[a] - g.origin[a]) / g.spacing + 1e-9)));
    if (lo[a] > hi[a]) return false;
  }
  r = {lo[1], hi[1], lo[2], hi[2], lo[0], hi[0]};
  return true;
}

void raster_wulff(const Node& n, const GridSpec& g, const RowRange& rr, VoxelSet& out) {
  const WulffShape& w = *n.wulff;
  const simd::Metric m = simd::make_metric(w.dual(), true);
  const bool exact = m.kind != simd::Metric::Kind::kTable;
  const double r = w.radius();
  const std::size_t len = static_cast<std::size_t>(rr.i1 - rr.i0 + 1);
  std::vector<double> row(len);
  Vec x(g.dim);
  for (int k = rr.k0; k <= rr.k1; ++k) {
    for (int j = rr.j0; j <= rr.j1; ++j) {
      const Vec c = g.center(rr.i0, j, k) - n.offset;
      const double z = g.dim == 3 ? c[2] : 0.0;
      simd::metric_row(m, c[0], g.spacing, c[1], z, len, row.data());
      const std::size_t base = g.index(rr.i0, j, k);
      if (exact) {
        simd::mark_le(row.data(), len, r, out.words().data(), base);
        continue;
      }
      // Table values are accurate to ~1e-4; settle the band exactly.
      for (std::size_t i = 0; i < len; ++i) {
        bool in = row[i] <= r;
        if (std::abs(row[i] - r) <= 1e-3 * r) {
          x = c;
          x[0] += g.spacing * static_cast<double>(i);
          in = w.dual().eval(x) <= r;
        }
        if (in) out.set(base + i, true);
      }
    }
  }
}

void raster_polytope(const Node& n, const GridSpec& g, const RowRange& rr, VoxelSet& out) {
  const Polytope& p = *n.polytope;
  for (int k = rr.k0; k <= rr.k1; ++k) {
    for (int j = rr.j0; j <= rr.j1; ++j) {
      const Vec c = g.center(0, j, k) - n.offset;
      double xlo = -kInf, xhi = kInf;
      bool empty = false;
      for (const Halfspace& h : p.halfspaces) {
        double rest = h.offset - h.normal[1] * c[1];
        if (g.dim == 3) rest -= h.normal[2] * c[2];
        const double a = h.normal[0];
        if (std::abs(a) < 1e-14) {
          if (rest < 0) empty = true;
        } else if (a > 0) {
          xhi = std::min(xhi, rest / a);
        } else {
          xlo = std::max(xlo, rest / a);
        }
      }
      if (empty) continue;
      for (int i = rr.i0; i <= rr.i1; ++i) {
        const double xi = c[0] + g.spacing * i;
        if (xi >= xlo - 1e-12 && xi <= xhi + 1e-12) out.set(g.index(i, j, k), true);
      }
    }
  }
}

void raster_surface(const Node& n, const GridSpec& g, const RowRange& rr, VoxelSet& out) {
  const TriSurface& s = *n.surface;
  const int nj = rr.j1 - rr.j0 + 1, nk = rr.k1 - rr.k0 + 1;
  std::vector<std::vector<double>> hits(static_cast<std::size_t>(nj) * nk);
  const double jy = 1.37e-9 * g.spacing, jz = 2.41e-9 * g.spacing;
  auto ycoord = [&](int j) { return g.origin[1] + g.spacing * j - n.offset[1] + jy; };
  auto zcoord = [&](int k) { return g.dim == 3 ? g.origin[2] + g.spacing * k - n.offset[2] + jz : 0.0; };
  auto to_j = [&](double y, bool up) {
    const double t = (y + n.offset[1] - g.origin[1]) / g.spacing;
    return up ? static_cast<int>(std::ceil(t)) : static_cast<int>(std::floor(t));
  };
  auto to_k = [&](double z, bool up) {
    const double t = (z + n.offset[2] - g.origin[2]) / g.spacing;
    return up ? static_cast<int>(std::ceil(t)) : static_cast<int>(std::floor(t));
  };
  for (const auto& f : s.faces) {
    const Vec& p = s.vertices[f[0]];
    const Vec& q = s.vertices[f[1]];
    if (s.dim == 2) {
      const int ja = std::max(rr.j0, to_j(std::min(p[1], q[1]), true) - 1);
      const int jb = std::min(rr.j1, to_j(std::max(p[1], q[1]), false) + 1);
      for (int j = ja; j <= jb; ++j) {
        const double yy = ycoord(j);
        if ((p[1] > yy) == (q[1] > yy)) continue;
        hits[j - rr.j0].push_back(p[0] + (yy - p[1]) * (q[0] - p[0]) / (q[1] - p[1]));
      }
      continue;
    }
    const Vec& r = s.vertices[f[2]];
    const double d = (q[1] - p[1]) * (r[2] - p[2]) - (r[1] - p[1]) * (q[2] - p[2]);
    if (d == 0) continue;
    const int ja = std::max(rr.j0, to_j(std::min({p[1], q[1], r[1]}), true) - 1);
    const int jb = std::min(rr.j1, to_j(std::max({p[1], q[1], r[1]}), false) + 1);
    const int ka = std::max(rr.k0, to_k(std::min({p[2], q[2], r[2]}), true) - 1);
    const int kb = std::min(rr.k1, to_k(std::max({p[2], q[2], r[2]}), false) + 1);
    for (int k = ka; k <= kb; ++k) {
      const double zz = zcoord(k);
      for (int j = ja; j <= jb; ++j) {
        const double yy = ycoord(j);
        const double u = ((yy - p[1]) * (r[2] - p[2]) - (r[1] - p[1]) * (zz - p[2])) / d;
        const double v = ((q[1] - p[1]) * (zz - p[2]) - (yy - p[1]) * (q[2] - p[2])) / d;
        if (u < 0 || v < 0 || u + v > 1) continue;
        hits[static_cast<std::size_t>(k - rr.k0) * nj + (j - rr.j0)].push_back(
            p[0] + u * (q[0] - p[0]) + v * (r[0] - p[0]));
      }
    }
  }
  for (int k = rr.k0; k <= rr.k1; ++k) {
    for (int j = rr.j0; j <= rr.j1; ++j) {
      auto& h = hits[static_cast<std::size_t>(k - rr.k0) * nj + (j - rr.j0)];
      if (h.size() % 2 != 0) throw Error(ErrorCode::kInvalidMesh, "surface is not closed");
      std::sort(h.begin(), h.end());
      for (std::size_t e = 0; e + 1 < h.size(); e += 2) {
        for (int i = rr.i0; i <= rr.i1; ++i) {
          const double xi = g.origin[0] + g.spacing * i - n.offset[0];
          if (xi > h[e] && xi < h[e + 1]) out.set(g.index(i, j, k), true);
        }
      }
    }
  }
}

VoxelSet raster_node(const Node& n, const GridSpec& g) {
  switch (n.kind) {
    case Node::Kind::kUnion:
      return set_union(raster_node(*n.a, g), raster_node(*n.b, g));
    case Node::Kind::kIntersection:
      return set_intersection(raster_node(*n.a, g), raster_node(*n.b, g));
    case Node::Kind::kDifference:
      return set_difference(raster_node(*n.a, g), raster_node(*n.b, g));
    default:
      break;
  }
  VoxelSet out(g);
  RowRange rr;
  if (!row_range(n, g, rr)) return out;
  switch (n.kind) {
    case Node::Kind::kWulff:
      raster_wulff(n, g, rr, out);
      break;
    case Node::Kind::kPolytope:
      raster_polytope(n, g, rr, out);
      break;
    case Node::Kind::kSurface:
      raster_surface(n, g, rr, out);
      break;
    default:
      for (int k = rr.k0; k <= rr.k1; ++k) {
        for (int j = rr.j0; j <= rr.j1; ++j) {
          for (int i = rr.i0; i <= rr.i1; ++i) {
            if (n.inside(g.center(i, j, k) - n.offset)) out.set(g.index(i, j, k), true);
          }
        }
      }
  }
  return out;
}

std::shared_ptr<const Node> binary(Node::Kind kind, const std::shared_ptr<const Node>& a,
                                   const std::shared_ptr<const Node>& b) {
  if (a->dim != b->dim) throw Error(ErrorCode::kInvalidArgument, "set dimension mismatch");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->dim = a->dim;
  n->a = a;
  n->b = b;
  n->offset = Vec::Zero(a->dim);
  if (kind == Node::Kind::kUnion) {
    n->lo = a->lo.cwiseMin(b->lo);
    n->hi = a->hi.cwiseMax(b->hi);
  } else if (kind == Node::Kind::kIntersection) {
    n->lo = a->lo.cwiseMax(b->lo);
    n->hi = a->hi.cwiseMin(b->hi);
  } else {
    n->lo = a->lo;
    n->hi = a->hi;
  }
  return n;
}

}  // namespace

SetExpr SetExpr::predicate(int dim, Predicate inside, Vec lo, Vec hi) {
  if ((dim != 2 && dim != 3) || lo.size() != dim || hi.size() != dim || !inside) {
    throw Error(ErrorCode::kInvalidArgument, "bad predicate set");
  }
  auto n = leaf(Node::Kind::kPredicate, dim, lo, hi, Vec());
  n->inside = std::move(inside);
  return SetExpr(n);
}

SetExpr SetExpr::wulff(const WulffShape& w, Vec center) {
  const int dim = w.dim();
  Vec ext(dim);
  for (int i = 0; i < dim; ++i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1.0;
    ext[i] = w.radius() * w.norm().eval(e) * (1 + 1e-9);
  }
  auto n = leaf(Node::Kind::kWulff, dim, -ext, ext, center);
  n->wulff = std::make_shared<WulffShape>(w);
  return SetExpr(n);
}

SetExpr SetExpr::polytope(const Polytope& p, Vec center) {
  Vec lo = Vec::Constant(p.dim, kInf), hi = Vec::Constant(p.dim, -kInf);
  for (const Vec& v : p.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  auto n = leaf(Node::Kind::kPolytope, p.dim, lo, hi, center);
  n->polytope = std::make_shared<Polytope>(p);
  return SetExpr(n);
}

SetExpr SetExpr::surface(const TriSurface& s) {
  validate(s);
  Vec lo = Vec::Constant(s.dim, kInf), hi = Vec::Constant(s.dim, -kInf);
  for (const Vec& v : s.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  auto n = leaf(Node::Kind::kSurface, s.dim, lo, hi, Vec());
  n->surface = std::make_shared<TriSurface>(s);
  return SetExpr(n);
}

SetExpr SetExpr::operator|(const SetExpr& o) const { return SetExpr(binary(Node::Kind::kUnion, node_, o.node_)); }
SetExpr SetExpr::operator&(const SetExpr& o) const { return SetExpr(binary(Node::Kind::kIntersection, node_, o.node_)); }
SetExpr SetExpr::operator-(const SetExpr& o) const { return SetExpr(binary(Node::Kind::kDifference, node_, o.node_)); }

SetExpr SetExpr::translated(const Vec& t) const {
  if (t.size() != dim()) throw Error(ErrorCode::kInvalidArgument, "offset dimension mismatch");
  return SetExpr(shift(node_, t));
}

int SetExpr::dim() const { return node_->dim; }
bool SetExpr::contains(const Vec& x) const { return node_contains(*node_, x); }
Vec SetExpr::lower() const { return node_->lo; }
Vec SetExpr::upper() const { return node_->hi; }

VoxelSet rasterize(const SetExpr& expr, const GridSpec& grid) {
  if (grid.dim != expr.dim()) throw Error(ErrorCode::kInvalidArgument, "grid dimension mismatch");
  VoxelSet s = raster_node(*expr.node_, grid);
  s.check_margin();
  return s;
}

VoxelSet rasterize(const SetExpr& expr, double h, int margin) {
  const Vec lo = expr.lower(), hi = expr.upper();
  for (int i = 0; i < expr.dim(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i]) {
      throw Error(ErrorCode::kInvalidArgument, "set is unbounded or empty");
    }
  }
  return rasterize(expr, grid_for_box(lo, hi, h, margin));
}

}  // namespace aniso
