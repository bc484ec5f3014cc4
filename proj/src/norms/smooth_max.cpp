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

#include "smooth_max.hpp"

#include <algorithm>
#include <cmath>

namespace aniso::detail {

namespace {

// asinh(exp(l)), stable for large |l|.
double asinh_exp(double l) {
  if (l > 0.0) return l + std::log1p(std::sqrt(1.0 + std::exp(-2.0 * l)));
  return std::asinh(std::exp(l));
}

// d/dl asinh(exp(l)) = 1 / sqrt(1 + exp(-2 l)).
double asinh_exp_slope(double l) {
  if (l > 0.0) return 1.0 / std::sqrt(1.0 + std::exp(-2.0 * l));
  const double e = std::exp(l);
  return e / std::sqrt(1.0 + e * e);
}

}  // namespace

SmoothMax::SmoothMax(int dim, double eps) : dim_(dim), eps_(eps) {
  // F(e1) = 1 + eps*log(1 + exp(-2/eps) + 2(dim-1) exp(-1/eps)).
  level_ = 1.0 + eps * std::log1p(std::exp(-2.0 / eps) +
                                  2.0 * (dim - 1) * std::exp(-1.0 / eps));
}

double SmoothMax::lse(const Vec& w) const {
  const double m = w.cwiseAbs().maxCoeff();
  double acc = 0.0;
  for (int i = 0; i < dim_; ++i) {
    acc += std::exp((w[i] - m) / eps_) + std::exp((-w[i] - m) / eps_);
  }
  return m + eps_ * std::log(acc);
}

void SmoothMax::lse_derivatives(const Vec& w, Vec* grad, Mat* hess) const {
  const double m = w.cwiseAbs().maxCoeff();
  double z = 0.0;
  double plus[3], minus[3];
  for (int i = 0; i < dim_; ++i) {
    plus[i] = std::exp((w[i] - m) / eps_);
    minus[i] = std::exp((-w[i] - m) / eps_);
    z += plus[i] + minus[i];
  }
  Vec g(dim_);
  for (int i = 0; i < dim_; ++i) g[i] = (plus[i] - minus[i]) / z;
  if (grad) *grad = g;
  if (hess) {
    Mat h = -g * g.transpose();
    for (int i = 0; i < dim_; ++i) h(i, i) += (plus[i] + minus[i]) / z;
    *hess = h / eps_;
  }
}

double SmoothMax::gauge(const Vec& v) const {
  const double mx = v.cwiseAbs().maxCoeff();
  if (mx == 0.0) return 0.0;
  // f(s) = F(s v) is convex and increasing on s > 0 and f(1/|v|_inf) >= level,
  // so Newton from the right decreases monotonically to the root.
  double s = 1.0 / mx;
  for (int it = 0; it < 200; ++it) {
    Vec w = s * v;
    Vec g;
    lse_derivatives(w, &g, nullptr);
    const double f = lse(w) - level_;
    const double slope = g.dot(v);
    if (!(slope > 0.0)) break;
    const double step = f / slope;
    s -= step;
    if (std::abs(step) <= 1e-16 * s) break;
  }
  return 1.0 / s;
}

Vec SmoothMax::gauge_grad(const Vec& v) const {
  const double phi = gauge(v);
  Vec w = v / phi;
  Vec g;
  lse_derivatives(w, &g, nullptr);
  return g / g.dot(w);
}

Mat SmoothMax::gauge_hess(const Vec& v) const {
  const double phi = gauge(v);
  Vec w = v / phi;
  Vec g;
  Mat h;
  lse_derivatives(w, &g, &h);
  const double a = g.dot(w);
  Vec dphi = g / a;
  Mat id = Mat::Identity(dim_, dim_);
  Mat left = id - dphi * w.transpose();
  Mat out = left * h * left.transpose() / (a * phi);
  return 0.5 * (out + out.transpose());
}

double SmoothMax::support(const Vec& x, Vec* maximizer) const {
  const double mx = x.cwiseAbs().maxCoeff();
  if (mx == 0.0) {
    if (maximizer) *maximizer = Vec::Zero(dim_);
    return 0.0;
  }
  // KKT: x = mu grad F(v)  <=>  v_i = eps * asinh(t x_i), t = exp(sigma) > 0.
  // g(sigma) = F(v(sigma)) - level is increasing.
  double logx[3];
  for (int i = 0; i < dim_; ++i) logx[i] = x[i] != 0.0 ? std::log(std::abs(x[i])) : 0.0;
  auto point = [&](double sigma, Vec* dv) {
    Vec v(dim_);
    if (dv) dv->resize(dim_);
    for (int i = 0; i < dim_; ++i) {
      if (x[i] == 0.0) {
        v[i] = 0.0;
        if (dv) (*dv)[i] = 0.0;
        continue;
      }
      const double sign = x[i] > 0 ? 1.0 : -1.0;
      const double l = sigma + logx[i];
      v[i] = sign * eps_ * asinh_exp(l);
      if (dv) (*dv)[i] = sign * eps_ * asinh_exp_slope(l);
    }
    return v;
  };
  // asinh(e^l) >= l + log 2, so this sigma puts max |v_i| above the level.
  double hi = level_ / eps_ - std::log(mx);
  double lo = hi - 40.0;
  while (lse(point(lo, nullptr)) > level_) lo -= 40.0;
  double sigma = hi;
  for (int it = 0; it < 200; ++it) {
    Vec dv;
    Vec v = point(sigma, &dv);
    const double f = lse(v) - level_;
    if (f > 0.0) hi = sigma; else lo = sigma;
    Vec g;
    lse_derivatives(v, &g, nullptr);
    const double slope = g.dot(dv);
    double next = slope > 0.0 ? sigma - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - sigma) <= 1e-15 * std::max(1.0, std::abs(sigma)) ||
        hi - lo <= 1e-15 * std::max(1.0, std::abs(sigma))) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  Vec v = point(sigma, nullptr);
  if (maximizer) *maximizer = v;
  return x.dot(v);
}

}  // namespace aniso::detail
