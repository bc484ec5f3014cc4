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

#include "aniso/norm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "aniso/support_table.hpp"
#include "smooth_max.hpp"

namespace aniso {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kSingularPoint: return "singular-point";
    case ErrorCode::kUnsupportedOperation: return "unsupported-operation";
    case ErrorCode::kConvergence: return "convergence";
    case ErrorCode::kNonUniqueMaximizer: return "non-unique-maximizer";
    case ErrorCode::kInvalidMesh: return "invalid-mesh";
    case ErrorCode::kOrientation: return "orientation";
    case ErrorCode::kMargin: return "margin";
    case ErrorCode::kAllInfinite: return "all-infinite";
    case ErrorCode::kGeometry: return "geometry";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kUnknownKey: return "unknown-key";
    case ErrorCode::kInvalidSpec: return "invalid-spec";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

const char* to_string(NormFamily family) {
  switch (family) {
    case NormFamily::kEuclidean: return "euclidean";
    case NormFamily::kWeightedLp: return "lp";
    case NormFamily::kEllipse: return "ellipse";
    case NormFamily::kSmoothMax: return "smoothmax";
    case NormFamily::kL1: return "l1";
    case NormFamily::kLinf: return "linf";
    case NormFamily::kCustom: return "custom";
    case NormFamily::kSampled: return "sampled";
  }
  return "unknown";
}

struct Norm::Impl {
  NormFamily family;
  int dim;
  double p = 2.0;
  double eps = 0.0;
  std::vector<double> weights;
  std::vector<double> weight_roots;  // w_i^{1/p}
  Mat q;
  CustomNorm custom;
  std::shared_ptr<const SupportTable> table;
  detail::SmoothMax smooth;
};

namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "ambient dimension must be 2 or 3, got " + std::to_string(dim));
  }
}

void check_input(const Norm& n, const Vec& v) {
  if (v.size() != n.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "vector dimension mismatch");
  }
  if (!all_finite(v)) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite input vector");
  }
}

std::string fmt_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Vec fd_grad(const std::function<double(const Vec&)>& f, const Vec& v) {
  Vec g(v.size());
  const double scale = std::max(1.0, v.norm());
  const double step = 1e-6 * scale;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Vec a = v, b = v;
    a[i] += step;
    b[i] -= step;
    g[i] = (f(a) - f(b)) / (2.0 * step);
  }
  return g;
}

Mat fd_hess(const std::function<Vec(const Vec&)>& grad, const Vec& v) {
  const Eigen::Index n = v.size();
  Mat h(n, n);
  const double step = 1e-5 * v.norm();
  for (Eigen::Index j = 0; j < n; ++j) {
    Vec a = v, b = v;
    a[j] += step;
    b[j] -= step;
    h.col(j) = (grad(a) - grad(b)) / (2.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

}  // namespace

Norm Norm::euclidean(int dim) {
  check_dim(dim);
  auto impl = std::make_shared<Impl>();
  impl->family = NormFamily::kEuclidean;
  impl->dim = dim;
  return Norm(impl);
}

Norm Norm::lp(int dim, double p, std::vector<double> weights) {
  check_dim(dim);
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::kInvalidArgument,
                "lp exponent must be finite and > 1 (use l1/linf)");
  }
  if (weights.empty()) weights.assign(dim, 1.0);
  if (static_cast<int>(weights.size()) != dim) {
    throw Error(ErrorCode::kInvalidArgument, "lp weight count must equal dim");
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument, "lp weights must be positive");
    }
  }
  auto impl = std::make_shared<Impl>();
  impl->family = NormFamily::kWeightedLp;
  impl->dim = dim;
  impl->p = p;
  impl->weights = std::move(weights);
  for (double w : impl->weights) impl->weight_roots.push_back(std::pow(w, 1.0 / p));
  return Norm(impl);
}

Norm Norm::ellipse(const Mat& q) {
  const int dim = static_cast<int>(q.rows());
  check_dim(dim);
  if (q.cols() != dim) {
    throw Error(ErrorCode::kInvalidArgument, "ellipse matrix must be square");
  }
  const double scale = q.cwiseAbs().maxCoeff();
  if (!((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale)) {
    throw Error(ErrorCode::kInvalidArgument, "ellipse matrix must be symmetric");
  }
  Eigen::LLT<Mat> llt(q);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidArgument,
                "ellipse matrix must be positive definite");
  }
  auto impl = std::make_shared<Impl>();
  impl->family = NormFamily::kEllipse;
  impl->dim = dim;
  impl->q = 0.5 * (q + q.transpose());
  return Norm(impl);
}

Norm Norm::smoothed_max(int dim, double eps) {
  check_dim(dim);
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothmax eps must be > 0");
  }
  auto impl = std::make_shared<Impl>();
  impl->family = NormFamily::kSmoothMax;
  impl->dim = dim;
  impl->eps = eps;
  impl->smooth = detail::SmoothMax(dim, eps);
  return Norm(impl);
}

Norm Norm::l1(int dim) {
  check_dim(dim);
  auto impl = std::make_shared<Impl>();
  impl->family = NormFamily::kL1;
  impl->dim = dim;
  return Norm(impl);
}

Norm Norm::linf(int dim) {
  check_dim(dim);
  auto impl = std::make_shared<Impl>();
  impl->family = NormFamily::kLinf;
  impl->dim = dim;
  return Norm(impl);
}

Norm Norm::custom(int dim, CustomNorm fns) {
  check_dim(dim);
  if (!fns.eval) {
    throw Error(ErrorCode::kInvalidArgument, "custom norm needs eval");
  }
  auto impl = std::make_shared<Impl>();
  impl->family = NormFamily::kCustom;
  impl->dim = dim;
  impl->custom = std::move(fns);
  return Norm(impl);
}

Norm Norm::sampled(std::shared_ptr<const SupportTable> table) {
  if (!table) throw Error(ErrorCode::kInvalidArgument, "null support table");
  auto impl = std::make_shared<Impl>();
  impl->family = NormFamily::kSampled;
  impl->dim = table->dim();
  impl->table = std::move(table);
  return Norm(impl);
}

int Norm::dim() const { return impl().dim; }
NormFamily Norm::family() const { return impl().family; }
double Norm::p() const { return impl().p; }
double Norm::eps() const { return impl().eps; }
const std::vector<double>& Norm::weights() const { return impl().weights; }
const Mat& Norm::matrix() const { return impl().q; }

bool Norm::analytic_derivatives() const {
  switch (family()) {
    case NormFamily::kCustom:
      return static_cast<bool>(impl().custom.grad) &&
             static_cast<bool>(impl().custom.hess);
    case NormFamily::kSampled:
      return false;
    default:
      return true;
  }
}

bool Norm::is_smooth() const {
  switch (family()) {
    case NormFamily::kEuclidean:
    case NormFamily::kEllipse:
    case NormFamily::kSmoothMax:
      return true;
    case NormFamily::kWeightedLp:
      return impl().p >= 2.0;
    case NormFamily::kCustom:
      return static_cast<bool>(impl().custom.hess);
    default:
      return false;
  }
}

bool Norm::is_crystalline() const {
  return family() == NormFamily::kL1 || family() == NormFamily::kLinf;
}

bool Norm::is_strictly_convex() const {
  switch (family()) {
    case NormFamily::kL1:
    case NormFamily::kLinf:
    case NormFamily::kSampled:
      return false;
    case NormFamily::kCustom:
      return impl().custom.strictly_convex;
    default:
      return true;
  }
}

std::string Norm::spec() const {
  const Impl& m = impl();
  switch (m.family) {
    case NormFamily::kEuclidean: return "euclidean";
    case NormFamily::kL1: return "l1";
    case NormFamily::kLinf: return "linf";
    case NormFamily::kSmoothMax: return "smoothmax:" + fmt_double(m.eps);
    case NormFamily::kWeightedLp: {
      std::string s = "lp:" + fmt_double(m.p);
      bool unit = std::all_of(m.weights.begin(), m.weights.end(),
                              [](double w) { return w == 1.0; });
      if (!unit) {
        s += ":";
        for (std::size_t i = 0; i < m.weights.size(); ++i) {
          if (i) s += ",";
          s += fmt_double(m.weights[i]);
        }
      }
      return s;
    }
    case NormFamily::kEllipse: {
      std::string s = "ellipse:";
      for (int i = 0; i < m.dim; ++i) {
        for (int j = 0; j < m.dim; ++j) {
          if (i || j) s += ",";
          s += fmt_double(m.q(i, j));
        }
      }
      return s;
    }
    case NormFamily::kCustom: return m.custom.name;
    case NormFamily::kSampled: return "sampled";
  }
  return "unknown";
}

double Norm::eval(const Vec& v) const {
  check_input(*this, v);
  const Impl& m = impl();
  switch (m.family) {
    case NormFamily::kEuclidean:
      return v.norm();
    case NormFamily::kL1:
      return v.cwiseAbs().sum();
    case NormFamily::kLinf:
      return v.cwiseAbs().maxCoeff();
    case NormFamily::kEllipse:
      return std::sqrt(std::max(0.0, v.dot(m.q * v)));
    case NormFamily::kWeightedLp: {
      double s[3];
      double mx = 0.0;
      for (int i = 0; i < m.dim; ++i) {
        s[i] = m.weight_roots[i] * std::abs(v[i]);
        mx = std::max(mx, s[i]);
      }
      if (mx == 0.0) return 0.0;
      double acc = 0.0;
      for (int i = 0; i < m.dim; ++i) acc += std::pow(s[i] / mx, m.p);
      return mx * std::pow(acc, 1.0 / m.p);
    }
    case NormFamily::kSmoothMax:
      return m.smooth.gauge(v);
    case NormFamily::kCustom:
      return m.custom.eval(v);
    case NormFamily::kSampled:
      return m.table->eval(v);
  }
  return 0.0;
}

Vec Norm::grad(const Vec& v) const {
  check_input(*this, v);
  const Impl& m = impl();
  if (v.isZero(0.0)) {
    throw Error(ErrorCode::kSingularPoint, "gradient at the origin");
  }
  switch (m.family) {
    case NormFamily::kEuclidean:
      return v / v.norm();
    case NormFamily::kEllipse: {
      Vec qv = m.q * v;
      return qv / std::sqrt(v.dot(qv));
    }
    case NormFamily::kWeightedLp: {
      const double phi = eval(v);
      Vec g(m.dim);
      for (int i = 0; i < m.dim; ++i) {
        const double s = m.weight_roots[i] * std::abs(v[i]) / phi;
        const double sign = v[i] > 0 ? 1.0 : (v[i] < 0 ? -1.0 : 0.0);
        g[i] = m.weight_roots[i] * sign * std::pow(s, m.p - 1.0);
      }
      return g;
    }
    case NormFamily::kSmoothMax:
      return m.smooth.gauge_grad(v);
    case NormFamily::kL1: {
      Vec g(m.dim);
      for (int i = 0; i < m.dim; ++i) {
        if (v[i] == 0.0) {
          throw Error(ErrorCode::kSingularPoint,
                      "l1 is not differentiable on coordinate hyperplanes");
        }
        g[i] = v[i] > 0 ? 1.0 : -1.0;
      }
      return g;
    }
    case NormFamily::kLinf: {
      Vec a = v.cwiseAbs();
      Eigen::Index k;
      const double mx = a.maxCoeff(&k);
      for (int i = 0; i < m.dim; ++i) {
        if (i != k && a[i] == mx) {
          throw Error(ErrorCode::kSingularPoint,
                      "linf is not differentiable where the max is attained "
                      "twice");
        }
      }
      Vec g = Vec::Zero(m.dim);
      g[k] = v[k] > 0 ? 1.0 : -1.0;
      return g;
    }
    case NormFamily::kCustom:
      if (m.custom.grad) return m.custom.grad(v);
      return fd_grad(m.custom.eval, v);
    case NormFamily::kSampled:
      throw Error(ErrorCode::kUnsupportedOperation,
                  "sampled norms provide values only");
  }
  return v;
}

Vec Norm::subgradient(const Vec& v) const {
  const Impl& m = impl();
  if (m.family == NormFamily::kL1) {
    check_input(*this, v);
    Vec g(m.dim);
    for (int i = 0; i < m.dim; ++i) g[i] = v[i] > 0 ? 1.0 : (v[i] < 0 ? -1.0 : 0.0);
    return g;
  }
  if (m.family == NormFamily::kLinf) {
    check_input(*this, v);
    if (v.isZero(0.0)) return Vec::Zero(m.dim);
    const double mx = v.cwiseAbs().maxCoeff();
    Vec g = Vec::Zero(m.dim);
    int ties = 0;
    for (int i = 0; i < m.dim; ++i) ties += std::abs(v[i]) == mx;
    for (int i = 0; i < m.dim; ++i) {
      if (std::abs(v[i]) == mx) g[i] = (v[i] > 0 ? 1.0 : -1.0) / ties;
    }
    return g;
  }
  return grad(v);
}

Mat Norm::hess(const Vec& v) const {
  check_input(*this, v);
  const Impl& m = impl();
  if (v.isZero(0.0)) {
    throw Error(ErrorCode::kSingularPoint, "Hessian at the origin");
  }
  switch (m.family) {
    case NormFamily::kEuclidean: {
      const double r = v.norm();
      Vec u = v / r;
      return (Mat::Identity(m.dim, m.dim) - u * u.transpose()) / r;
    }
    case NormFamily::kEllipse: {
      Vec qv = m.q * v;
      const double phi = std::sqrt(v.dot(qv));
      return (m.q - qv * qv.transpose() / (phi * phi)) / phi;
    }
    case NormFamily::kWeightedLp: {
      if (m.p < 2.0) {
        for (int i = 0; i < m.dim; ++i) {
          if (v[i] == 0.0) {
            throw Error(ErrorCode::kSingularPoint,
                        "lp with p < 2 has no Hessian on coordinate planes");
          }
        }
      }
      const double phi = eval(v);
      Vec g = grad(v);
      Mat h = -g * g.transpose();
      for (int i = 0; i < m.dim; ++i) {
        const double s = m.weight_roots[i] * std::abs(v[i]) / phi;
        h(i, i) += m.weight_roots[i] * m.weight_roots[i] * std::pow(s, m.p - 2.0);
      }
      return (m.p - 1.0) / phi * h;
    }
    case NormFamily::kSmoothMax:
      return m.smooth.gauge_hess(v);
    case NormFamily::kCustom:
      if (m.custom.hess) return m.custom.hess(v);
      if (m.custom.strictly_convex) {
        return fd_hess([this](const Vec& x) { return grad(x); }, v);
      }
      [[fallthrough]];
    default:
      throw Error(ErrorCode::kUnsupportedOperation,
                  std::string("no Hessian for norm family ") +
                      to_string(m.family));
  }
}

namespace {

std::vector<double> parse_list(std::string_view text, std::string_view spec) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string item(text.substr(pos, end - pos));
    char* stop = nullptr;
    const double x = std::strtod(item.c_str(), &stop);
    if (item.empty() || stop != item.c_str() + item.size() || !std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "bad number '" + item + "' in norm spec '" + std::string(spec) +
                      "'");
    }
    out.push_back(x);
    pos = end + 1;
  }
  return out;
}

}  // namespace

Norm parse_norm(std::string_view spec, int dim) {
  auto need_dim = [&](int d) {
    if (d != 2 && d != 3) {
      throw Error(ErrorCode::kInvalidSpec,
                  "norm spec '" + std::string(spec) + "' needs dim 2 or 3");
    }
    return d;
  };
  auto fail = [&](const std::string& why) -> Norm {
    throw Error(ErrorCode::kInvalidSpec, why + ": '" + std::string(spec) + "'");
  };
  std::string_view head = spec.substr(0, spec.find(':'));
  std::string_view rest =
      head.size() < spec.size() ? spec.substr(head.size() + 1) : "";
  try {
    if (head == "euclidean" && rest.empty()) return Norm::euclidean(need_dim(dim));
    if (head == "l1" && rest.empty()) return Norm::l1(need_dim(dim));
    if (head == "linf" && rest.empty()) return Norm::linf(need_dim(dim));
    if (head == "smoothmax") {
      auto v = parse_list(rest, spec);
      if (v.size() != 1) return fail("smoothmax takes one parameter");
      return Norm::smoothed_max(need_dim(dim), v[0]);
    }
    if (head == "lp") {
      std::string_view pstr = rest.substr(0, rest.find(':'));
      auto p = parse_list(pstr, spec);
      if (p.size() != 1) return fail("lp takes one exponent");
      std::vector<double> w;
      if (pstr.size() < rest.size()) w = parse_list(rest.substr(pstr.size() + 1), spec);
      int d = dim;
      if (d == 0 && !w.empty()) d = static_cast<int>(w.size());
      return Norm::lp(need_dim(d), p[0], w);
    }
    if (head == "ellipse") {
      auto v = parse_list(rest, spec);
      int d = v.size() == 4 ? 2 : (v.size() == 9 ? 3 : 0);
      if (d == 0) return fail("ellipse needs 4 or 9 matrix entries");
      if (dim != 0 && dim != d) return fail("ellipse size does not match dim");
      Mat q(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) q(i, j) = v[i * d + j];
      return Norm::ellipse(q);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidSpec) throw;
    throw Error(ErrorCode::kInvalidSpec, e.what());
  }
  return fail("unknown norm");
}

Mat tangent_basis(const Vec& n) {
  const int dim = static_cast<int>(n.size());
  Vec u = n.normalized();
  if (dim == 2) {
    Mat t(2, 1);
    t(0, 0) = -u[1];
    t(1, 0) = u[0];
    return t;
  }
  Eigen::Vector3d a(u[0], u[1], u[2]);
  Eigen::Vector3d helper = std::abs(a.x()) < 0.6 ? Eigen::Vector3d::UnitX()
                                                 : (std::abs(a.y()) < 0.6
                                                        ? Eigen::Vector3d::UnitY()
                                                        : Eigen::Vector3d::UnitZ());
  Eigen::Vector3d t1 = a.cross(helper).normalized();
  Eigen::Vector3d t2 = a.cross(t1);
  Mat t(3, 2);
  t.col(0) = t1;
  t.col(1) = t2;
  return t;
}

std::vector<Vec> sphere_samples(int dim, int count) {
  check_dim(dim);
  std::vector<Vec> out;
  out.reserve(count);
  if (dim == 2) {
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * kPi * (k + 0.5) / count;
      out.push_back(make_vec({std::cos(t), std::sin(t)}));
    }
    return out;
  }
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = golden * k;
    out.push_back(make_vec({r * std::cos(t), r * std::sin(t), z}));
  }
  return out;
}

ConvexityCertificate convexity_certificate(const Norm& norm, int samples) {
  if (!norm.is_smooth()) {
    throw Error(ErrorCode::kUnsupportedOperation,
                "convexity certificate needs a C^2 norm");
  }
  if (samples < 100) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 100 samples");
  }
  ConvexityCertificate cert;
  cert.sample_count = samples;
  for (const Vec& u : sphere_samples(norm.dim(), samples)) {
    Mat t = tangent_basis(u);
    Mat ht = t.transpose() * norm.hess(u) * t;
    double least;
    if (ht.rows() == 1) {
      least = ht(0, 0);
    } else {
      Eigen::SelfAdjointEigenSolver<Mat> es(ht, Eigen::EigenvaluesOnly);
      least = es.eigenvalues()[0];
    }
    if (least < cert.gamma || cert.min_location.size() == 0) {
      cert.gamma = least;
      cert.min_location = u;
    }
  }
  cert.gamma = std::max(cert.gamma, 0.0);
  return cert;
}

SphereExtremes sphere_extremes(const std::function<double(const Vec&)>& f,
                               int dim, int samples) {
  SphereExtremes e;
  for (const Vec& u : sphere_samples(dim, samples)) {
    const double x = f(u);
    e.min = std::min(e.min, x);
    e.max = std::max(e.max, x);
  }
  return e;
}

}  // namespace aniso
