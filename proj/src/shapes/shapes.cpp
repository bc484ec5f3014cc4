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
#include <charconv>
#include <cmath>
#include <complex>
#include <optional>
#include <cstdio>
#include <random>
#include <sstream>

#include "aniso/shapes.hpp"
#include "aniso/simd/kernels.hpp"
#include "aniso/wulff.hpp"

namespace aniso {

namespace {

constexpr int kPatterns = 4;
constexpr int kDefaultBubbleColumns = 192;
constexpr int kDefaultBubbleCap2d = 1024;

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> pattern_weights(int pattern, std::uint64_t seed) {
  std::vector<double> w(kPatterns, 0.0);
  if (pattern >= 0) {
    w[pattern] = 1.0;
    return w;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double sum = 0.0;
  for (double& x : w) {
    x = g(rng);
    sum += std::abs(x);
  }
  for (double& x : w) x /= sum;
  return w;
}

// Mode m and its ambient gradient at u; harmonic polynomials scaled so the
// maximum on the sphere is 1.
double mode(int dim, int m, const Vec& u, Vec* grad) {
  if (dim == 2) {
    const int k = m + 2;
    const std::complex<double> z(u[0], u[1]);
    const std::complex<double> d = static_cast<double>(k) * std::pow(z, k - 1);
    if (grad) *grad = make_vec({d.real(), -d.imag()});
    return std::pow(z, k).real();
  }
  const double x = u[0], y = u[1], z = u[2];
  const double s = 3.0 * std::sqrt(3.0);
  switch (m) {
    case 0:
      if (grad) *grad = make_vec({-x, -y, 2 * z});
      return (2 * z * z - x * x - y * y) / 2;
    case 1:
      if (grad) *grad = make_vec({2 * x, -2 * y, 0});
      return x * x - y * y;
    case 2:
      if (grad) *grad = make_vec({-3 * x * z, -3 * y * z, 3 * z * z - 1.5 * (x * x + y * y)});
      return z * z * z - 1.5 * z * (x * x + y * y);
    default:
      if (grad) *grad = s * make_vec({y * z, x * z, x * y});
      return s * x * y * z;
  }
}

double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 60) {
  for (int k = 0; k < iters; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

TriSurface perturbed_mesh(const ShapeSpec& spec, int resolution) {
  const Norm& phi = spec.norm;
  const int dim = phi.dim();
  TriSurface s = unit_sphere(dim, resolution > 0 ? resolution : default_resolution(dim));
  for (std::size_t v = 0; v < s.vertices.size(); ++v) {
    const Vec u = s.vertices[v];
    const Vec g = phi.grad(u);
    const Mat hess = phi.hess(u);
    const double y = pattern_value(dim, spec.pattern, spec.seed, u);
    const Vec dy = pattern_gradient(dim, spec.pattern, spec.seed, u);
    const double rho = spec.radius * (1 + spec.epsilon * y);
    const Mat t = tangent_basis(u);
    Vec n;
    if (dim == 2) {
      const Vec tan = spec.radius * spec.epsilon * dy.dot(t.col(0)) * g + rho * hess * t.col(0);
      n = make_vec({tan[1], -tan[0]});
    } else {
      Vec x1 = spec.radius * spec.epsilon * dy.dot(t.col(0)) * g + rho * hess * t.col(0);
      Vec x2 = spec.radius * spec.epsilon * dy.dot(t.col(1)) * g + rho * hess * t.col(1);
      n = cross3(x1, x2);
    }
    if (n.dot(u) < 0) n = -n;
    s.vertices[v] = rho * g;
    s.normals[v] = n.normalized();
  }
  s.resolution = resolution;
  return s;
}

std::vector<Vec> union_centers(const ShapeSpec& spec) {
  if (!spec.centers.empty()) return spec.centers;
  const int dim = spec.dim();
  DualNorm dual(spec.norm);
  const double step = 2 * spec.radius / dual.eval(unit_vec(dim, 0));
  std::vector<Vec> out;
  for (int j = 0; j < spec.count; ++j) out.push_back((j - 0.5 * (spec.count - 1)) * step * unit_vec(dim, 0));
  return out;
}

bool mirror_symmetric(const Norm& phi) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int k = 0; k < 256; ++k) {
    Vec v(phi.dim());
    for (int a = 0; a < v.size(); ++a) v[a] = g(rng);
    Vec m = v;
    m[0] = -m[0];
    const double p = phi.eval(v);
    if (std::abs(phi.eval(m) - p) > 1e-9 * p) return false;
  }
  return true;
}

// Left face of the ball about (c, 0) in the half-plane spanned by e1 and d:
// s = q(rho) measured from the tip, with slope dq/drho.
struct Profile {
  std::vector<double> rho, q, slope;
};

Profile ball_profile(const DualNorm& dual, double radius, const Vec& d) {
  constexpr int kSamples = 800;
  constexpr double kMaxAngle = 1.45;
  const int dim = d.size();
  const Vec e1 = unit_vec(dim, 0);
  const double c = radius / dual.eval(e1);
  Profile p;
  for (int k = 0; k <= kSamples; ++k) {
    const double t = static_cast<double>(k) / kSamples;
    const double beta = kMaxAngle * t * t;
    const Vec dir = -std::cos(beta) * e1 + std::sin(beta) * d;
    const double r = radius / dual.eval(dir);
    const Vec g = dual.grad(dir);
    p.rho.push_back(r * std::sin(beta));
    p.q.push_back(c - r * std::cos(beta));
    p.slope.push_back(k == 0 ? 0.0 : -g.dot(d) / g.dot(e1));
  }
  return p;
}

// Point where the neck rho = a cosh(s / len) has the same slope as the
// profile: len / sqrt(rho^2 - a^2) = q'(rho). Returns (rho*, q*), or nothing
// when the sampled profile is never steep enough.
std::optional<std::pair<double, double>> tangency(const Profile& p, double a, double len) {
  double prev = -len;
  for (std::size_t k = 1; k < p.rho.size(); ++k) {
    const double r2 = p.rho[k] * p.rho[k] - a * a;
    const double g = r2 > 0 ? p.slope[k] * std::sqrt(r2) - len : -len;
    if (g >= 0) {
      const double t = (0 - prev) / (g - prev);
      return std::pair{p.rho[k - 1] + t * (p.rho[k] - p.rho[k - 1]), p.q[k - 1] + t * (p.q[k] - p.q[k - 1])};
    }
    prev = g;
  }
  return std::nullopt;
}

// Axial half-length of the neck minus the ball offset; zero when the neck
// meets the ball tangentially.
std::optional<double> neck_mismatch(const Profile& p, double a, double len, double half_gap) {
  const auto t = tangency(p, a, len);
  if (!t) return std::nullopt;
  return len * std::acosh(std::max(1.0, t->first / a)) - t->second - half_gap;
}

TriSurface two_bubble_mesh(const ShapeSpec& spec, int resolution) {
  const int dim = spec.dim();
  const bool flat = dim == 2;
  const int columns = flat ? 2 : (resolution > 0 ? resolution : kDefaultBubbleColumns);
  const TwoBubble tb(spec, columns);
  const Vec e1 = unit_vec(dim, 0);
  const double r = spec.radius;
  const double tip = tb.c2[0];
  const int rows = flat ? std::max(2, (resolution > 0 ? resolution : kDefaultBubbleCap2d) / 2)
                        : std::max(2, columns / 2);

  double max_u = 0.0, min_beta = kPi;
  for (const auto& sec : tb.sections) {
    max_u = std::max(max_u, std::sqrt(std::pow(sec.attach_rho / sec.waist, 2) - 1));
    min_beta = std::min(min_beta, std::atan2(sec.attach_rho, tip - sec.attach_s));
  }
  const double spacing = r * (kPi - min_beta) / rows;
  double arc = 0.0;
  for (const auto& sec : tb.sections) {
    arc = std::max(arc, 2 * std::hypot(sec.attach_s, sec.attach_rho - sec.waist));
  }
  int tube = static_cast<int>(std::ceil(std::max(arc / spacing, 12 * max_u)));
  tube = std::max(4, tube + tube % 2);

  // One column per section: cap 1 (mirrored), neck, cap 2, poles excluded.
  const int entries = 2 * (rows - 1) + tube + 1;
  const int n = static_cast<int>(tb.sections.size());
  std::vector<Vec> pos(static_cast<std::size_t>(n) * entries), nrm(pos.size());
  const double dtheta = 2 * kPi / n;
  for (int i = 0; i < n; ++i) {
    const auto& sec = tb.sections[i];
    const Vec d = tb.radial(sec.theta);
    Vec dd = Vec::Zero(dim);
    double slope_a = 0.0;
    if (!flat) {
      dd = tb.radial(sec.theta + kPi / 2);
      slope_a = (tb.sections[(i + 1) % n].waist - tb.sections[(i + n - 1) % n].waist) / (2 * dtheta);
    }
    const double a = sec.waist, len = sec.length;
    const double big_u = std::sqrt(std::pow(sec.attach_rho / a, 2) - 1);
    Vec* col = &pos[static_cast<std::size_t>(i) * entries];
    Vec* ncol = &nrm[static_cast<std::size_t>(i) * entries];
    for (int k = 0; k <= tube; ++k) {
      const double u = big_u * (2.0 * k / tube - 1);
      const double sa = std::asinh(u), rho = a * std::sqrt(1 + u * u);
      const Vec xs = e1 + (a / len) * u * d;
      const Vec xt = slope_a * (std::sqrt(1 + u * u) - sa * u) * d + rho * dd;
      Vec nv = flat ? Vec(d - (a / len) * u * e1) : cross3(xs, xt);
      if (nv.dot(d) < 0) nv = -nv;
      col[rows - 1 + k] = len * sa * e1 + rho * d;
      ncol[rows - 1 + k] = nv.normalized();
    }
    const double beta0 = std::atan2(sec.attach_rho, tip - sec.attach_s);
    for (int j = 1; j < rows; ++j) {
      const double beta = beta0 + (kPi - beta0) * j / rows;
      const Vec dir = -std::cos(beta) * e1 + std::sin(beta) * d;
      const Vec x = tb.c2 + (r / tb.dual.eval(dir)) * dir;
      const Vec g = tb.dual.grad(dir).normalized();
      Vec xm = x, gm = g;
      xm[0] = -xm[0];
      gm[0] = -gm[0];
      col[rows - 1 + tube + j] = x;
      ncol[rows - 1 + tube + j] = g;
      col[rows - 1 - j] = xm;
      ncol[rows - 1 - j] = gm;
    }
  }

  TriSurface s;
  s.dim = dim;
  const double pole = r / tb.dual.eval(e1);
  s.vertices = {tb.c1 - pole * e1, tb.c2 + pole * e1};
  s.normals = {-e1, e1};
  s.vertices.insert(s.vertices.end(), pos.begin(), pos.end());
  s.normals.insert(s.normals.end(), nrm.begin(), nrm.end());
  auto id = [&](int i, int e) { return 2 + (i % n) * entries + e; };
  if (flat) {
    std::vector<int> loop{0};
    for (int e = 0; e < entries; ++e) loop.push_back(id(0, e));
    loop.push_back(1);
    for (int e = entries - 1; e >= 0; --e) loop.push_back(id(1, e));
    for (std::size_t k = 0; k < loop.size(); ++k) s.faces.push_back({loop[k], loop[(k + 1) % loop.size()], -1});
  } else {
    for (int i = 0; i < n; ++i) {
      s.faces.push_back({0, id(i + 1, 0), id(i, 0)});
      for (int e = 0; e + 1 < entries; ++e) {
        s.faces.push_back({id(i, e), id(i + 1, e), id(i + 1, e + 1)});
        s.faces.push_back({id(i, e), id(i + 1, e + 1), id(i, e + 1)});
      }
      s.faces.push_back({id(i, entries - 1), id(i + 1, entries - 1), 1});
    }
  }
  auto avg_normal = [&](std::size_t f) {
    const auto& ids = s.faces[f];
    Vec avg = s.normals[ids[0]] + s.normals[ids[1]];
    if (!flat) avg += s.normals[ids[2]];
    return avg;
  };
  if (face_normal(s, 1).dot(avg_normal(1)) < 0) {
    for (auto& f : s.faces) std::swap(f[0], f[1]);
  }
  s.resolution = resolution;
  validate(s);
  for (std::size_t f = 0; f < s.faces.size(); ++f) {
    if (face_normal(s, f).dot(avg_normal(f)) <= 0) throw Error(ErrorCode::kGeometry, "two-bubble neck folds over itself");
  }
  return s;
}

}  // namespace

const char* to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kWulff: return "wulff";
    case ShapeKind::kPerturbedWulff: return "perturbed-wulff";
    case ShapeKind::kTwoBubble: return "two-bubble";
    case ShapeKind::kTangentUnion: return "tangent-union";
  }
  return "?";
}

void ShapeSpec::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kInvalidSpec, m); };
  if (!(radius > 0) || !std::isfinite(radius)) fail("shape radius must be positive");
  if (!(std::abs(epsilon) < 0.3)) fail("perturbation amplitude must satisfy |eps| < 0.3");
  if (pattern < -1 || pattern >= kPatterns) fail("perturbation pattern must be in -1..3");
  switch (kind) {
    case ShapeKind::kWulff:
      break;
    case ShapeKind::kPerturbedWulff:
      if (norm.is_crystalline()) fail("perturbed Wulff shapes need a smooth norm");
      break;
    case ShapeKind::kTwoBubble:
      if (norm.is_crystalline()) fail("two-bubble shapes need a smooth norm");
      if (!mirror_symmetric(norm)) fail("two-bubble shapes need a norm symmetric under x1 -> -x1");
      if (!(neck_width > 0) || neck_width > radius / 2) fail("neck width must lie in (0, r/2]");
      break;
    case ShapeKind::kTangentUnion: {
      if (count < 1 && centers.empty()) fail("tangent union needs at least one ball");
      DualNorm dual(norm);
      for (std::size_t i = 0; i < centers.size(); ++i) {
        if (centers[i].size() != dim()) fail("center dimension mismatch");
        for (std::size_t j = 0; j < i; ++j) {
          if (dual.eval(centers[i] - centers[j]) < 2 * radius * (1 - 1e-12)) {
            fail("tangent-union centers closer than 2r");
          }
        }
      }
      break;
    }
  }
}

std::string ShapeSpec::to_string() const {
  std::string out = aniso::to_string(kind);
  out += " norm=" + norm.spec() + " dim=" + std::to_string(dim()) + " r=" + fmt(radius);
  if (kind == ShapeKind::kPerturbedWulff) {
    out += " eps=" + fmt(epsilon) + " pattern=" + std::to_string(pattern) + " seed=" + std::to_string(seed);
  }
  if (kind == ShapeKind::kTwoBubble) out += " neck=" + fmt(neck_width);
  if (kind == ShapeKind::kTangentUnion) {
    if (centers.empty()) {
      out += " count=" + std::to_string(count);
    } else {
      out += " centers=";
      for (std::size_t i = 0; i < centers.size(); ++i) {
        if (i) out += ";";
        for (int a = 0; a < centers[i].size(); ++a) out += (a ? "," : "") + fmt(centers[i][a]);
      }
    }
  }
  return out;
}

ShapeSpec parse_shape_spec(std::string_view text, const Norm& default_norm) {
  std::istringstream in{std::string(text)};
  std::string kind;
  if (!(in >> kind)) throw Error(ErrorCode::kParse, "empty shape spec");
  ShapeSpec spec;
  if (kind == "wulff") {
    spec.kind = ShapeKind::kWulff;
  } else if (kind == "perturbed-wulff") {
    spec.kind = ShapeKind::kPerturbedWulff;
  } else if (kind == "two-bubble") {
    spec.kind = ShapeKind::kTwoBubble;
  } else if (kind == "tangent-union") {
    spec.kind = ShapeKind::kTangentUnion;
  } else {
    throw Error(ErrorCode::kInvalidSpec, "unknown shape kind '" + kind + "'");
  }
  std::string norm_text, centers_text, token;
  int dim = default_norm.dim();
  auto number = [](const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse, "bad number for shape key '" + key + "': " + v);
    }
  };
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParse, "expected key=value in shape spec: " + token);
    const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
    if (key == "norm") {
      norm_text = value;
    } else if (key == "dim") {
      dim = static_cast<int>(number(key, value));
    } else if (key == "r") {
      spec.radius = number(key, value);
    } else if (key == "eps") {
      spec.epsilon = number(key, value);
    } else if (key == "pattern") {
      spec.pattern = static_cast<int>(number(key, value));
    } else if (key == "neck") {
      spec.neck_width = number(key, value);
    } else if (key == "count") {
      spec.count = static_cast<int>(number(key, value));
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(number(key, value));
    } else if (key == "centers") {
      centers_text = value;
    } else {
      throw Error(ErrorCode::kUnknownKey, "unknown shape key '" + key + "'");
    }
  }
  if (dim != 2 && dim != 3) throw Error(ErrorCode::kInvalidSpec, "shape dimension must be 2 or 3");
  if (!norm_text.empty()) {
    spec.norm = parse_norm(norm_text, dim);
  } else if (dim == default_norm.dim()) {
    spec.norm = default_norm;
  } else {
    spec.norm = parse_norm(default_norm.spec(), dim);
  }
  if (spec.norm.dim() != dim) throw Error(ErrorCode::kInvalidSpec, "norm dimension differs from dim=");
  if (!centers_text.empty()) {
    std::istringstream cs(centers_text);
    std::string item;
    while (std::getline(cs, item, ';')) {
      std::istringstream ps(item);
      std::string c;
      std::vector<double> xs;
      while (std::getline(ps, c, ',')) xs.push_back(number("centers", c));
      if (static_cast<int>(xs.size()) != dim) throw Error(ErrorCode::kParse, "center has wrong dimension");
      Vec v(dim);
      for (int a = 0; a < dim; ++a) v[a] = xs[a];
      spec.centers.push_back(v);
    }
    spec.count = static_cast<int>(spec.centers.size());
  }
  spec.validate();
  return spec;
}

double pattern_value(int dim, int pattern, std::uint64_t seed, const Vec& u) {
  const auto w = pattern_weights(pattern, seed);
  double y = 0.0;
  for (int m = 0; m < kPatterns; ++m) {
    if (w[m] != 0.0) y += w[m] * mode(dim, m, u, nullptr);
  }
  return y;
}

Vec pattern_gradient(int dim, int pattern, std::uint64_t seed, const Vec& u) {
  const auto w = pattern_weights(pattern, seed);
  Vec g = Vec::Zero(dim);
  for (int m = 0; m < kPatterns; ++m) {
    if (w[m] == 0.0) continue;
    Vec gm;
    mode(dim, m, u, &gm);
    g += w[m] * gm;
  }
  return g;
}

TwoBubble::TwoBubble(const ShapeSpec& spec, int columns) : radius(spec.radius), dual(spec.norm) {
  spec.validate();
  const int dim = spec.dim();
  const Vec e1 = unit_vec(dim, 0);
  const double c = spec.radius / dual.eval(e1);
  const int n = dim == 2 ? 2 : (columns > 0 ? columns : kDefaultBubbleColumns);
  std::vector<Profile> profiles;
  for (int i = 0; i < n; ++i) {
    Section sec;
    sec.theta = 2 * kPi * i / n;
    sections.push_back(sec);
    profiles.push_back(ball_profile(dual, spec.radius, radial(sec.theta)));
  }
  const double a0 = spec.neck_width / 2;
  // Smallest stretch on a quarter-octave ladder for which every section
  // has a tangential neck.
  auto attempt = [&](double k) {
    const auto m0 = neck_mismatch(profiles[0], a0, k * a0, 0.0);
    if (!m0 || !(*m0 > 0)) return false;
    const double g = 2 * *m0;
    std::vector<double> waist(n, a0);
    for (int i = 1; i < n; ++i) {
      auto f = [&](double a) {
        const auto m = neck_mismatch(profiles[i], a, k * a, g / 2);
        return m ? *m : -kInf;
      };
      double hi = a0;
      while (f(hi) < 0) {
        hi *= 1.25;
        if (hi > spec.radius) return false;
      }
      waist[i] = bisect(f, 1e-9 * spec.radius, hi);
    }
    gap = g;
    stretch = k;
    for (int i = 0; i < n; ++i) {
      const double a = waist[i];
      const auto t = tangency(profiles[i], a, k * a);
      if (!t) return false;
      sections[i].waist = a;
      sections[i].length = k * a;
      sections[i].attach_rho = t->first;
      sections[i].attach_s = g / 2 + t->second;
    }
    return true;
  };
  double k = 1.0;
  while (!attempt(k)) {
    k *= std::pow(2.0, 0.25);
    if (k > 64) throw Error(ErrorCode::kGeometry, "no C1 neck of the requested width");
  }
  c1 = -(c + gap / 2) * e1;
  c2 = (c + gap / 2) * e1;
}

Vec TwoBubble::radial(double theta) const {
  if (dim() == 2) return make_vec({0.0, std::cos(theta) >= 0 ? 1.0 : -1.0});
  return make_vec({0.0, std::cos(theta), std::sin(theta)});
}

TwoBubble::Section TwoBubble::section_at(double theta) const {
  if (dim() == 2) return sections[std::cos(theta) >= 0 ? 0 : 1];
  const int n = static_cast<int>(sections.size());
  double t = theta / (2 * kPi) * n;
  t -= n * std::floor(t / n);
  const int i = static_cast<int>(t) % n;
  const double w = t - std::floor(t);
  const Section& p = sections[i];
  const Section& q = sections[(i + 1) % n];
  Section out;
  out.theta = theta;
  out.waist = (1 - w) * p.waist + w * q.waist;
  out.length = stretch * out.waist;
  out.attach_s = (1 - w) * p.attach_s + w * q.attach_s;
  out.attach_rho = (1 - w) * p.attach_rho + w * q.attach_rho;
  return out;
}

bool TwoBubble::contains(const Vec& x) const {
  const double s = x[0];
  const double y = x[1], z = dim() == 3 ? x[2] : 0.0;
  const double rho = std::hypot(y, z);
  const Section sec = section_at(dim() == 3 ? std::atan2(z, y) : (y >= 0 ? 0.0 : kPi));
  if (std::abs(s) <= sec.attach_s && rho <= sec.waist * std::cosh(s / sec.length)) return true;
  return dual.eval(x - c1) <= radius || dual.eval(x - c2) <= radius;
}

std::vector<Vec> shape_centers(const ShapeSpec& spec) {
  switch (spec.kind) {
    case ShapeKind::kTwoBubble: {
      TwoBubble tb(spec);
      return {tb.c1, tb.c2};
    }
    case ShapeKind::kTangentUnion:
      return union_centers(spec);
    default:
      return {Vec::Zero(spec.dim())};
  }
}

TriSurface gen(const ShapeSpec& spec, int resolution) {
  spec.validate();
  switch (spec.kind) {
    case ShapeKind::kWulff: {
      WulffShape w(spec.norm, spec.radius);
      if (w.is_crystalline()) return w.polytope().surface();
      return w.boundary_mesh(resolution);
    }
    case ShapeKind::kPerturbedWulff:
      return perturbed_mesh(spec, resolution);
    case ShapeKind::kTwoBubble:
      return two_bubble_mesh(spec, resolution);
    case ShapeKind::kTangentUnion: {
      WulffShape w(spec.norm, spec.radius);
      const TriSurface ball = w.is_crystalline() ? w.polytope().surface() : w.boundary_mesh(resolution);
      TriSurface out;
      bool first = true;
      for (const Vec& c : union_centers(spec)) {
        out = first ? translated(ball, c) : combine(out, translated(ball, c));
        first = false;
      }
      return out;
    }
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown shape kind");
}

SetExpr region(const ShapeSpec& spec) {
  spec.validate();
  const int dim = spec.dim();
  WulffShape w(spec.norm, spec.radius);
  switch (spec.kind) {
    case ShapeKind::kWulff:
      return w.is_crystalline() ? SetExpr::polytope(w.polytope()) : SetExpr::wulff(w);
    case ShapeKind::kTangentUnion: {
      const auto cs = union_centers(spec);
      auto ball = [&](const Vec& c) {
        return w.is_crystalline() ? SetExpr::polytope(w.polytope(), c) : SetExpr::wulff(w, c);
      };
      SetExpr out = ball(cs[0]);
      for (std::size_t i = 1; i < cs.size(); ++i) out = out | ball(cs[i]);
      return out;
    }
    case ShapeKind::kPerturbedWulff: {
      auto dual = std::make_shared<DualNorm>(spec.norm);
      auto metric = std::make_shared<simd::Metric>(simd::make_metric(*dual, true));
      const double r = spec.radius, eps = std::abs(spec.epsilon), e = spec.epsilon;
      const int pattern = spec.pattern;
      const std::uint64_t seed = spec.seed;
      auto inside = [=](const Vec& x) {
        const double approx = metric->eval(x[0], x[1], dim == 3 ? x[2] : 0.0);
        if (approx < r * (1 - eps) * (1 - 1e-3)) return true;
        if (approx > r * (1 + eps) * (1 + 1e-3)) return false;
        const double d = dual->eval(x);
        if (d == 0) return true;
        const Vec u = dual->grad(x).normalized();
        return d <= r * (1 + e * pattern_value(dim, pattern, seed, u));
      };
      Vec ext(dim);
      for (int i = 0; i < dim; ++i) ext[i] = r * (1 + eps) * spec.norm.eval(unit_vec(dim, i)) * (1 + 1e-9);
      return SetExpr::predicate(dim, inside, -ext, ext);
    }
    case ShapeKind::kTwoBubble: {
      auto tb = std::make_shared<TwoBubble>(spec);
      auto metric = std::make_shared<simd::Metric>(simd::make_metric(tb->dual, true));
      double slab = 0.0, tube = 0.0;
      for (const auto& sec : tb->sections) {
        slab = std::max(slab, sec.attach_s);
        tube = std::max(tube, sec.attach_rho);
      }
      auto inside = [=](const Vec& x) {
        const double z = dim == 3 ? x[2] : 0.0;
        const double m1 = metric->eval(x[0] - tb->c1[0], x[1], z);
        const double m2 = metric->eval(x[0] - tb->c2[0], x[1], z);
        const double m = std::min(m1, m2), r = tb->radius;
        if (m < r * (1 - 1e-3)) return true;
        const bool near_neck = std::abs(x[0]) <= slab && std::hypot(x[1], z) <= tube * 1.01;
        if (!near_neck && m > r * (1 + 1e-3)) return false;
        return tb->contains(x);
      };
      Vec ext(dim);
      for (int i = 0; i < dim; ++i) ext[i] = spec.radius * spec.norm.eval(unit_vec(dim, i)) * (1 + 1e-9);
      const Vec lo = tb->c1.cwiseMin(tb->c2) - ext, hi = tb->c1.cwiseMax(tb->c2) + ext;
      return SetExpr::predicate(dim, inside, lo, hi);
    }
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown shape kind");
}

const char* to_string(SequenceKind kind) {
  return kind == SequenceKind::kSmoothMaxToLinf ? "smoothed-max-to-linf" : "lp-to-linf";
}

SequenceKind parse_sequence_kind(std::string_view text) {
  if (text == "smoothed-max-to-linf" || text == "smoothmax") return SequenceKind::kSmoothMaxToLinf;
  if (text == "lp-to-linf" || text == "lp") return SequenceKind::kLpToLinf;
  throw Error(ErrorCode::kInvalidSpec, "unknown norm sequence '" + std::string(text) + "'");
}

Norm norm_sequence(SequenceKind kind, int h, int dim) {
  if (h < 1) throw Error(ErrorCode::kInvalidArgument, "sequence index must be >= 1");
  if (kind == SequenceKind::kSmoothMaxToLinf) return Norm::smoothed_max(dim, std::ldexp(1.0, -h));
  return Norm::lp(dim, std::ldexp(1.0, h));
}

Norm sequence_limit(SequenceKind, int dim) { return Norm::linf(dim); }

NormBounds norm_bounds(const Norm& phi, int samples, std::uint64_t seed) {
  const int dim = phi.dim();
  DualNorm dual(phi);
  std::vector<Vec> dirs;
  for (const Vec& v : unit_sphere(dim, dim == 3 ? 3 : 720).vertices) dirs.push_back(v);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int k = 0; k < samples; ++k) {
    Vec v(dim);
    for (int a = 0; a < dim; ++a) v[a] = g(rng);
    dirs.push_back(v.normalized());
  }
  NormBounds b{kInf, 0.0, kInf, 0.0};
  for (const Vec& u : dirs) {
    const double p = phi.eval(u), q = dual.eval(u);
    b.lower = std::min(b.lower, p);
    b.upper = std::max(b.upper, p);
    b.dual_lower = std::min(b.dual_lower, q);
    b.dual_upper = std::max(b.dual_upper, q);
  }
  return b;
}

}  // namespace aniso
