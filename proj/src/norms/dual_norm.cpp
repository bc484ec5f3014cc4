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

#include "aniso/dual_norm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "smooth_max.hpp"

namespace aniso {

struct DualNorm::Cache {
  std::mutex mutex;
  std::unordered_map<std::uint64_t, Vec> maximizers;
  double ball_radius = 0.0;
};

namespace {

constexpr std::size_t kCacheLimit = 1 << 14;

std::uint64_t direction_key(const Vec& u) {
  Vec d = u.normalized();
  std::uint64_t h = 1469598103934665603ULL;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const auto q = static_cast<std::int64_t>(std::llround(d[i] * 1e9));
    h ^= static_cast<std::uint64_t>(q);
    h *= 1099511628211ULL;
  }
  return h;
}

void check_dual_input(const DualNorm& d, const Vec& u) {
  if (u.size() != d.dim()) {
    throw Error(ErrorCode::kInvalidArgument, "vector dimension mismatch");
  }
  if (!all_finite(u)) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite input vector");
  }
}

Norm closed_form_dual(const Norm& base) {
  const int dim = base.dim();
  switch (base.family()) {
    case NormFamily::kEuclidean:
      return Norm::euclidean(dim);
    case NormFamily::kL1:
      return Norm::linf(dim);
    case NormFamily::kLinf:
      return Norm::l1(dim);
    case NormFamily::kEllipse:
      return Norm::ellipse(base.matrix().inverse());
    case NormFamily::kWeightedLp: {
      const double p = base.p();
      const double q = p / (p - 1.0);
      std::vector<double> w;
      for (double wi : base.weights()) w.push_back(std::pow(wi, -q / p));
      return Norm::lp(dim, q, w);
    }
    default:
      throw Error(ErrorCode::kUnsupportedOperation, "no closed-form dual");
  }
}

}  // namespace

DualNorm::DualNorm(Norm base, DualSolverOptions options)
    : base_(std::move(base)),
      options_(options),
      cache_(std::make_shared<Cache>()) {}

bool DualNorm::has_closed_form() const {
  switch (base_.family()) {
    case NormFamily::kCustom:
    case NormFamily::kSampled:
      return false;
    default:
      return true;
  }
}

double DualNorm::ball_radius() const {
  // Largest Euclidean radius of {phi <= 1}; scales the ascent gap bound.
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (cache_->ball_radius == 0.0) {
    auto e = sphere_extremes([&](const Vec& v) { return base_.eval(v); },
                             dim(), 2000);
    cache_->ball_radius = 1.0 / e.min;
  }
  return cache_->ball_radius;
}

std::vector<Vec> DualNorm::starts() const {
  std::vector<Vec> out;
  if (dim() == 2) {
    for (int k = 0; k < 8; ++k) {
      const double t = kPi / 8.0 + k * kPi / 4.0;
      out.push_back(make_vec({std::cos(t), std::sin(t)}));
    }
  } else {
    const double s = 1.0 / std::sqrt(3.0);
    for (int k = 0; k < 8; ++k) {
      out.push_back(make_vec({(k & 1) ? s : -s, (k & 2) ? s : -s, (k & 4) ? s : -s}));
    }
  }
  out.resize(std::min<std::size_t>(out.size(),
                                   static_cast<std::size_t>(std::max(1, options_.restarts))));
  return out;
}

DualNorm::AscentResult DualNorm::ascend(const Vec& u, const Vec& start) const {
  const double radius = ball_radius();
  Vec v = start / base_.eval(start);
  double value = u.dot(v);
  double alpha = 0.5 * v.norm() / u.norm();
  AscentResult r{v, value, kInf, false};
  for (int it = 0; it < options_.max_iterations; ++it) {
    Vec g = base_.grad(v);
    // u = (u.v) g + d with phi°(g) = 1, so phi°(u) <= u.v + |d| * radius.
    r.gap = (u - value * g).norm() * radius;
    if (r.gap <= options_.tolerance * std::max(std::abs(value), 1e-300)) {
      r.converged = true;
      break;
    }
    Vec n = g.normalized();
    Vec d = u - u.dot(n) * n;
    Vec trial = v + alpha * d;
    trial /= base_.eval(trial);
    const double tv = u.dot(trial);
    if (tv > value) {
      v = trial;
      value = tv;
      alpha *= 2.0;
    } else {
      alpha *= 0.5;
      if (alpha * d.norm() < options_.min_step) break;
    }
  }
  r.v = v;
  r.value = value;
  return r;
}

void DualNorm::polish(const Vec& u, AscentResult* r) const {
  // Newton on the concave f(w) = u.w - phi(w)^2 / 2, whose maximizer is
  // phi°(u) times the constrained maximizer.
  if (base_.is_crystalline() || !base_.is_strictly_convex()) return;
  Vec w = std::max(r->value, 1e-300) * r->v;
  auto f = [&](const Vec& x) {
    const double p = base_.eval(x);
    return u.dot(x) - 0.5 * p * p;
  };
  double fw = f(w);
  for (int it = 0; it < 60; ++it) {
    const double p = base_.eval(w);
    Vec g = base_.grad(w);
    Vec grad = u - p * g;
    Mat h;
    try {
      h = g * g.transpose() + p * base_.hess(w);
    } catch (const Error&) {
      break;
    }
    Vec step = h.ldlt().solve(grad);
    if (!all_finite(step)) break;
    const double slack = 1e-14 * std::max(1.0, std::abs(fw));
    double t = 1.0;
    Vec next = w + step;
    double fn = f(next);
    while (fn < fw - slack && t > 1e-6) {
      t *= 0.5;
      next = w + t * step;
      fn = f(next);
    }
    if (fn < fw - slack) break;
    const bool done = (next - w).norm() <= 1e-15 * w.norm();
    w = next;
    fw = fn;
    if (done) break;
  }
  Vec v = w / base_.eval(w);
  const double value = u.dot(v);
  const double gap = (u - value * base_.grad(v)).norm() * ball_radius();
  if (value >= r->value - 1e-13 * std::abs(r->value) && gap < r->gap) {
    r->v = v;
    r->value = std::max(value, r->value);
    r->gap = gap;
    r->converged =
        r->converged || r->gap <= options_.tolerance * std::max(value, 1e-300);
  }
}

double DualNorm::eval(const Vec& u) const {
  check_dual_input(*this, u);
  if (u.isZero(0.0)) return 0.0;
  if (options_.method == DualMethod::kAutomatic && has_closed_form()) {
    switch (base_.family()) {
      case NormFamily::kEuclidean:
        return u.norm();
      case NormFamily::kL1:
        return u.cwiseAbs().maxCoeff();
      case NormFamily::kLinf:
        return u.cwiseAbs().sum();
      case NormFamily::kEllipse: {
        Vec x = base_.matrix().llt().solve(u);
        return std::sqrt(std::max(0.0, u.dot(x)));
      }
      case NormFamily::kWeightedLp:
        return closed_form_dual(base_).eval(u);
      case NormFamily::kSmoothMax:
        return detail::SmoothMax(dim(), base_.eps()).support(u, nullptr);
      default:
        break;
    }
  }
  if (base_.is_crystalline()) {
    throw Error(ErrorCode::kUnsupportedOperation,
                "projected ascent needs a differentiable norm");
  }
  const std::uint64_t key = direction_key(u);
  Vec start;
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->maximizers.find(key);
    if (it != cache_->maximizers.end()) start = it->second;
  }
  if (start.size() == 0) {
    double best = -kInf;
    for (const Vec& s : starts()) {
      const double score = u.dot(s) / base_.eval(s);
      if (score > best) {
        best = score;
        start = s;
      }
    }
  }
  AscentResult r = ascend(u, start);
  polish(u, &r);
  if (!r.converged) {
    throw ConvergenceError("dual-norm ascent did not converge", r.value, r.gap);
  }
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (cache_->maximizers.size() > kCacheLimit) cache_->maximizers.clear();
    cache_->maximizers[key] = r.v;
  }
  return r.value;
}

Vec DualNorm::grad(const Vec& u) const {
  check_dual_input(*this, u);
  if (u.isZero(0.0)) {
    throw Error(ErrorCode::kSingularPoint, "dual gradient at the origin");
  }
  const int n = dim();
  if (options_.method == DualMethod::kAutomatic && has_closed_form()) {
    switch (base_.family()) {
      case NormFamily::kEuclidean:
        return u.normalized();
      case NormFamily::kEllipse: {
        Vec x = base_.matrix().llt().solve(u);
        return x / std::sqrt(u.dot(x));
      }
      case NormFamily::kWeightedLp:
        return closed_form_dual(base_).grad(u);
      case NormFamily::kSmoothMax: {
        Vec v;
        detail::SmoothMax(n, base_.eps()).support(u, &v);
        return v;
      }
      case NormFamily::kL1: {
        // Unit ball is the cross-polytope; the max is at +-e_k.
        Vec a = u.cwiseAbs();
        Eigen::Index k;
        const double mx = a.maxCoeff(&k);
        for (int i = 0; i < n; ++i) {
          if (i != k && a[i] == mx) {
            throw Error(ErrorCode::kNonUniqueMaximizer,
                        "an edge or face of the l1 ball attains the sup");
          }
        }
        Vec v = Vec::Zero(n);
        v[k] = u[k] > 0 ? 1.0 : -1.0;
        return v;
      }
      case NormFamily::kLinf: {
        Vec v(n);
        for (int i = 0; i < n; ++i) {
          if (u[i] == 0.0) {
            throw Error(ErrorCode::kNonUniqueMaximizer,
                        "a face of the linf ball attains the sup");
          }
          v[i] = u[i] > 0 ? 1.0 : -1.0;
        }
        return v;
      }
      default:
        break;
    }
  }
  if (base_.is_crystalline()) {
    throw Error(ErrorCode::kUnsupportedOperation,
                "projected ascent needs a differentiable norm");
  }
  std::vector<AscentResult> runs;
  for (const Vec& s : starts()) {
    AscentResult r = ascend(u, s);
    polish(u, &r);
    runs.push_back(r);
  }
  auto best = std::max_element(runs.begin(), runs.end(),
                               [](const auto& a, const auto& b) {
                                 return a.value < b.value;
                               });
  if (!best->converged) {
    throw ConvergenceError("dual-norm ascent did not converge", best->value,
                           best->gap);
  }
  for (const AscentResult& r : runs) {
    if (!r.converged) continue;
    if ((r.v - best->v).norm() > options_.uniqueness_tolerance * best->v.norm()) {
      throw Error(ErrorCode::kNonUniqueMaximizer,
                  "ascent restarts converged to distinct maximizers");
    }
  }
  return best->v;
}

Mat DualNorm::hess(const Vec& u) const {
  check_dual_input(*this, u);
  if (u.isZero(0.0)) {
    throw Error(ErrorCode::kSingularPoint, "dual Hessian at the origin");
  }
  const double d = eval(u);
  Vec g = grad(u);
  Vec w = d * g;
  Vec gw = base_.grad(w);
  Mat h2 = gw * gw.transpose() + d * base_.hess(w);
  Mat inv = h2.ldlt().solve(Mat::Identity(dim(), dim()));
  return (inv - g * g.transpose()) / d;
}

Norm DualNorm::as_norm() const {
  if (has_closed_form() && base_.family() != NormFamily::kSmoothMax) {
    return closed_form_dual(base_);
  }
  DualNorm self = *this;
  CustomNorm fns;
  fns.name = "dual(" + base_.spec() + ")";
  fns.eval = [self](const Vec& u) { return self.eval(u); };
  fns.grad = [self](const Vec& u) { return self.grad(u); };
  if (base_.is_smooth()) {
    fns.hess = [self](const Vec& u) { return self.hess(u); };
  }
  fns.strictly_convex = base_.is_smooth();
  return Norm::custom(dim(), std::move(fns));
}

}  // namespace aniso
