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

#include <cmath>
#include <random>

#include "aniso/dual_norm.hpp"
#include "aniso/norm.hpp"
#include "aniso/support_table.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace aniso;
using aniso::testing::random_vec;
using aniso::testing::rel_err;

namespace {

Mat diag(std::initializer_list<double> d) {
  Vec v = make_vec(d);
  return v.asDiagonal();
}

std::vector<Norm> smooth_norms(int dim) {
  std::vector<Norm> out = {Norm::euclidean(dim), Norm::smoothed_max(dim, 0.1),
                           Norm::smoothed_max(dim, 0.05), Norm::lp(dim, 3.0),
                           Norm::lp(dim, 4.0, std::vector<double>(dim, 2.0))};
  out.push_back(dim == 2 ? Norm::ellipse(diag({1, 4}))
                         : Norm::ellipse(diag({1, 4, 1})));
  Mat q = Mat::Identity(dim, dim);
  q(0, 1) = q(1, 0) = 0.4;
  q(dim - 1, dim - 1) = 3.0;
  out.push_back(Norm::ellipse(q));
  return out;
}

std::vector<Norm> all_norms(int dim) {
  auto out = smooth_norms(dim);
  out.push_back(Norm::l1(dim));
  out.push_back(Norm::linf(dim));
  out.push_back(Norm::lp(dim, 1.5));
  return out;
}

// Oracle: max of u.v over 10^6 points w/phi(w) on the phi sphere.
std::pair<double, Vec> grid_search_dual_2d(const Norm& phi, const Vec& u, int n) {
  double best = -kInf;
  Vec arg;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * k / n;
    Vec w = make_vec({std::cos(t), std::sin(t)});
    Vec v = w / phi.eval(w);
    const double val = u.dot(v);
    if (val > best) {
      best = val;
      arg = v;
    }
  }
  return {best, arg};
}

}  // namespace

TEST_CASE("eval examples") {
  CHECK(Norm::euclidean(2).eval(make_vec({3, 4})) == doctest::Approx(5.0));
  CHECK(Norm::linf(3).eval(make_vec({1, -2, 0.5})) == 2.0);
  Norm e = Norm::ellipse(diag({1, 4}));
  Vec v = make_vec({1, 1});
  CHECK(e.eval(v) == doctest::Approx(std::sqrt(v.dot(diag({1, 4}) * v))).epsilon(1e-14));
  CHECK(e.eval(v) == doctest::Approx(2.2360679775));
  CHECK_THROWS_AS(e.eval(make_vec({NAN, 1})), Error);
  try {
    Norm::euclidean(2).eval(make_vec({INFINITY, 0}));
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("grad examples") {
  Norm eu = Norm::euclidean(2);
  CHECK((eu.grad(make_vec({0, 1})) - make_vec({0, 1})).norm() < 1e-15);
  CHECK((eu.grad(make_vec({0, 2})) - make_vec({0, 1})).norm() < 1e-15);
  Norm e = Norm::ellipse(diag({1, 4}));
  Vec v = make_vec({1, 0});
  Vec fd(2);
  for (int i = 0; i < 2; ++i) {
    Vec a = v, b = v;
    a[i] += 1e-6;
    b[i] -= 1e-6;
    fd[i] = (e.eval(a) - e.eval(b)) / 2e-6;
  }
  CHECK((e.grad(v) - fd).norm() < 1e-8);
  CHECK((e.grad(v) - make_vec({1, 0})).norm() < 1e-14);

  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code_of([&] { eu.grad(make_vec({0, 0})); }) == ErrorCode::kSingularPoint);
  CHECK(code_of([&] { Norm::l1(2).grad(make_vec({1, 0})); }) ==
        ErrorCode::kSingularPoint);
  CHECK(code_of([&] { Norm::linf(2).grad(make_vec({1, 1})); }) ==
        ErrorCode::kSingularPoint);
  CHECK((Norm::linf(2).grad(make_vec({1, -3})) - make_vec({0, -1})).norm() == 0.0);
}

TEST_CASE("hess examples") {
  Norm eu = Norm::euclidean(2);
  Mat h1 = eu.hess(make_vec({1, 0}));
  CHECK(h1(0, 0) == 0.0);
  CHECK(h1(0, 1) == 0.0);
  CHECK(h1(1, 1) == doctest::Approx(1.0));
  Mat h2 = eu.hess(make_vec({2, 0}));
  CHECK(h2(1, 1) == doctest::Approx(0.5));
  CHECK(std::abs(h2(0, 0)) < 1e-16);

  Norm sm = Norm::smoothed_max(3, 0.1);
  Vec v = make_vec({1, 1, 1});
  Mat h = sm.hess(v);
  Mat fd(3, 3);
  const double step = 1e-5;
  for (int j = 0; j < 3; ++j) {
    Vec a = v, b = v;
    a[j] += step;
    b[j] -= step;
    fd.col(j) = (sm.grad(a) - sm.grad(b)) / (2 * step);
  }
  CHECK((h - fd).cwiseAbs().maxCoeff() < 1e-5);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((h * v).norm() < 1e-10);

  CHECK_THROWS_AS(Norm::l1(3).hess(v), Error);
  CHECK_THROWS_AS(Norm::linf(3).hess(v), Error);
}

TEST_CASE("hessian matches finite differences for every smooth family") {
  std::mt19937_64 rng(7);
  for (int dim : {2, 3}) {
    for (const Norm& phi : smooth_norms(dim)) {
      for (int k = 0; k < 20; ++k) {
        Vec v = random_vec(rng, dim);
        Mat h = phi.hess(v);
        Mat fd(dim, dim);
        for (int j = 0; j < dim; ++j) {
          Vec a = v, b = v;
          a[j] += 1e-6;
          b[j] -= 1e-6;
          fd.col(j) = (phi.grad(a) - phi.grad(b)) / 2e-6;
        }
        INFO(phi.spec());
        CHECK((h - fd).cwiseAbs().maxCoeff() < 1e-4 * std::max(1.0, h.norm()));
        // -1 homogeneity and annihilation of v.
        CHECK((phi.hess(2.0 * v) * 2.0 - h).norm() < 1e-8 * std::max(1.0, h.norm()));
        CHECK((h * v).norm() < 1e-8 * std::max(1.0, h.norm()) * v.norm());
      }
    }
  }
}

TEST_CASE("norm axioms at random samples") {
  std::mt19937_64 rng(11);
  for (int dim : {2, 3}) {
    for (const Norm& phi : all_norms(dim)) {
      INFO(phi.spec());
      for (int k = 0; k < 500; ++k) {
        Vec u = random_vec(rng, dim), v = random_vec(rng, dim);
        for (double t : {0.0, 0.3, 2.0, 17.0}) {
          CHECK(std::abs(phi.eval(t * v) - t * phi.eval(v)) <= 1e-12 * t * phi.eval(v) + 1e-300);
        }
        CHECK(phi.eval(v) > 0.0);
        CHECK(phi.eval(u + v) <= phi.eval(u) + phi.eval(v) + 1e-12);
      }
      CHECK(phi.eval(Vec::Zero(dim)) == 0.0);
    }
  }
}

TEST_CASE("Euler identity and 0-homogeneous gradient") {
  std::mt19937_64 rng(12);
  for (int dim : {2, 3}) {
    for (const Norm& phi : smooth_norms(dim)) {
      INFO(phi.spec());
      for (int k = 0; k < 300; ++k) {
        Vec v = random_vec(rng, dim);
        Vec g = phi.grad(v);
        CHECK(std::abs(g.dot(v) - phi.eval(v)) <= 1e-10 * phi.eval(v));
        for (double t : {0.5, 2.0, 10.0}) {
          CHECK((phi.grad(t * v) - g).norm() <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("dual_eval examples") {
  CHECK(DualNorm(Norm::linf(3)).eval(make_vec({1, -2, 0.5})) == doctest::Approx(3.5));
  CHECK(DualNorm(Norm::euclidean(2)).eval(make_vec({3, 4})) == doctest::Approx(5.0));
  Norm e = Norm::ellipse(diag({1, 4}));
  Vec u = make_vec({0, 1});
  auto [oracle, arg] = grid_search_dual_2d(e, u, 1000000);
  CHECK(oracle == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(DualNorm(e).eval(u) == doctest::Approx(oracle).epsilon(1e-9));
  DualSolverOptions forced;
  forced.method = DualMethod::kAscent;
  CHECK(DualNorm(e, forced).eval(u) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("dual_grad examples") {
  CHECK((DualNorm(Norm::euclidean(2)).grad(make_vec({0, 3})) - make_vec({0, 1})).norm() < 1e-15);
  Norm e = Norm::ellipse(diag({1, 4}));
  Vec u = make_vec({0, 1});
  auto [oracle, arg] = grid_search_dual_2d(e, u, 1000000);
  CHECK((arg - make_vec({0, 0.5})).norm() < 1e-5);
  CHECK((DualNorm(e).grad(u) - make_vec({0, 0.5})).norm() < 1e-14);
  DualSolverOptions forced;
  forced.method = DualMethod::kAscent;
  CHECK((DualNorm(e, forced).grad(u) - make_vec({0, 0.5})).norm() < 1e-8);

  auto code = [](const DualNorm& d, const Vec& x) {
    try {
      d.grad(x);
    } catch (const Error& err) {
      return err.code();
    }
    return ErrorCode::kIo;
  };
  // A face of the cross-polytope {l1 <= 1} attains sup u.v for u = (1,1).
  CHECK(code(DualNorm(Norm::l1(2)), make_vec({1, 1})) == ErrorCode::kNonUniqueMaximizer);
  // An edge of the cube {linf <= 1} for u = (1,0); the vertex for u = (1,1).
  CHECK(code(DualNorm(Norm::linf(2)), make_vec({1, 0})) == ErrorCode::kNonUniqueMaximizer);
  CHECK((DualNorm(Norm::linf(2)).grad(make_vec({1, 1})) - make_vec({1, 1})).norm() == 0.0);
  CHECK(code(DualNorm(Norm::euclidean(2)), make_vec({0, 0})) == ErrorCode::kSingularPoint);
}

TEST_CASE("ascent restarts detect a flat face of a custom norm") {
  // Smooth outside but with a flat face in direction (1,0): linf-like in x.
  CustomNorm flat;
  flat.name = "flat";
  flat.eval = [](const Vec& v) { return Norm::linf(2).eval(v); };
  flat.strictly_convex = false;
  DualNorm d(Norm::custom(2, flat));
  CHECK_THROWS_AS(d.grad(make_vec({1, 1e-3})), Error);
}

TEST_CASE("convergence error carries best value and gap") {
  DualSolverOptions opt;
  opt.method = DualMethod::kAscent;
  opt.max_iterations = 1;
  CustomNorm c;
  c.eval = [](const Vec& v) { return Norm::ellipse(diag({1, 25})).eval(v); };
  c.strictly_convex = false;
  DualNorm d(Norm::custom(2, c), opt);
  try {
    d.eval(make_vec({0.3, 1}));
    FAIL("expected convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.code() == ErrorCode::kConvergence);
    CHECK(e.best_value() > 0.0);
    CHECK(e.gap_bound() > 0.0);
    CHECK(e.best_value() <= DualNorm(Norm::ellipse(diag({1, 25}))).eval(make_vec({0.3, 1})) + 1e-12);
  }
}

TEST_CASE("forced ascent agrees with closed forms") {
  std::mt19937_64 rng(5);
  DualSolverOptions forced;
  forced.method = DualMethod::kAscent;
  for (int dim : {2, 3}) {
    for (const Norm& phi : smooth_norms(dim)) {
      INFO(phi.spec());
      DualNorm exact(phi), ascent(phi, forced);
      for (int k = 0; k < 25; ++k) {
        Vec u = random_vec(rng, dim);
        CHECK(rel_err(ascent.eval(u), exact.eval(u)) < 1e-9);
        CHECK((ascent.grad(u) - exact.grad(u)).norm() < 1e-6);
      }
    }
  }
}

TEST_CASE("Fenchel inequality and dual-gradient identities") {
  std::mt19937_64 rng(9);
  for (int dim : {2, 3}) {
    for (const Norm& phi : all_norms(dim)) {
      INFO(phi.spec());
      DualNorm dual(phi);
      int violations = 0;
      for (int k = 0; k < 2000; ++k) {
        Vec u = random_vec(rng, dim), v = random_vec(rng, dim);
        if (u.dot(v) > dual.eval(u) * phi.eval(v) + 1e-10) ++violations;
      }
      CHECK(violations == 0);
      if (!phi.is_strictly_convex()) continue;
      for (int k = 0; k < 200; ++k) {
        Vec u = random_vec(rng, dim);
        Vec g = dual.grad(u);
        CHECK(std::abs(phi.eval(g) - 1.0) < 1e-10);
        CHECK(std::abs(u.dot(g) - dual.eval(u)) < 1e-10 * dual.eval(u));
        Vec unit = u / dual.eval(u);
        CHECK(std::abs(unit.dot(dual.grad(unit)) - 1.0) < 1e-10);
        CHECK((dual.grad(3.0 * u) - g).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("dual involution on smooth families") {
  std::mt19937_64 rng(10);
  DualSolverOptions forced;
  forced.method = DualMethod::kAscent;
  for (int dim : {2, 3}) {
    for (const Norm& phi : smooth_norms(dim)) {
      INFO(phi.spec());
      DualNorm twice(DualNorm(phi).as_norm(), forced);
      double worst = 0.0;
      const int n = phi.family() == NormFamily::kSmoothMax ? 100 : 1000;
      for (int k = 0; k < n; ++k) {
        Vec v = random_vec(rng, dim);
        worst = std::max(worst, rel_err(twice.eval(v), phi.eval(v)));
      }
      CHECK(worst <= 1e-8);
    }
  }
}

TEST_CASE("convexity certificate") {
  auto eu = convexity_certificate(Norm::euclidean(3), 1000);
  CHECK(std::abs(eu.gamma - 1.0) < 1e-9);
  CHECK(eu.sample_count == 1000);
  // Oracle in 2D: on the unit circle, t^T D^2 phi(u) t = phi''(theta) + phi(theta).
  Norm e = Norm::ellipse(diag({1, 4}));
  double oracle = kInf;
  auto f = [&](double t) { return e.eval(make_vec({std::cos(t), std::sin(t)})); };
  for (int k = 0; k < 20000; ++k) {
    const double t = 2 * kPi * k / 20000, s = 1e-4;
    oracle = std::min(oracle, (f(t + s) - 2 * f(t) + f(t - s)) / (s * s) + f(t));
  }
  auto ce = convexity_certificate(e, 20000);
  CHECK(ce.gamma > 0.0);
  CHECK(ce.gamma == doctest::Approx(oracle).epsilon(1e-5));
  // Attained at u = e2, where phi = 2 and t^T D^2 phi t = 1 / 2.
  CHECK(ce.gamma == doctest::Approx(0.5).epsilon(1e-6));

  double prev = kInf;
  for (double eps : {0.2, 0.1, 0.05}) {
    auto c = convexity_certificate(Norm::smoothed_max(3, eps), 4000);
    CHECK(c.gamma > 0.0);
    CHECK(c.gamma < prev);
    prev = c.gamma;
  }
  CHECK_THROWS_AS(convexity_certificate(Norm::l1(2), 1000), Error);
  CHECK_THROWS_AS(convexity_certificate(Norm::euclidean(2), 10), Error);
}

TEST_CASE("smoothed max is normalized and tends to linf") {
  for (int dim : {2, 3}) {
    Norm sm = Norm::smoothed_max(dim, 0.1);
    for (int i = 0; i < dim; ++i) {
      CHECK(sm.eval(unit_vec(dim, i)) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  Vec v = make_vec({1, 0.5, -0.2});
  const double eps = std::pow(2.0, -10);
  CHECK(std::abs(Norm::smoothed_max(3, eps).eval(v) - 1.0) <= 3 * eps * std::log(6.0));
}

TEST_CASE("norm grammar") {
  CHECK(parse_norm("euclidean", 2).family() == NormFamily::kEuclidean);
  CHECK(parse_norm("l1", 3).dim() == 3);
  Norm lp = parse_norm("lp:3:1,2,0.5", 0);
  CHECK(lp.dim() == 3);
  CHECK(lp.p() == 3.0);
  CHECK(lp.weights()[1] == 2.0);
  Norm e = parse_norm("ellipse:1,0,0,4", 0);
  CHECK(e.dim() == 2);
  CHECK(e.matrix()(1, 1) == 4.0);
  Norm s = parse_norm("smoothmax:0.1", 3);
  CHECK(s.eps() == 0.1);
  for (const Norm& n : all_norms(3)) {
    Norm back = parse_norm(n.spec(), 3);
    CHECK(back.spec() == n.spec());
    Vec x = make_vec({0.3, -1.2, 0.7});
    CHECK(back.eval(x) == n.eval(x));
  }
  for (const char* bad : {"euclid", "lp:x", "lp:0.5", "ellipse:1,2,3", "ellipse:1,2,3,4",
                          "smoothmax:", "smoothmax:-1", "euclidean:2"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_norm(bad, 2), Error);
  }
  CHECK_THROWS_AS(parse_norm("euclidean", 0), Error);
  CHECK_THROWS_AS(parse_norm("ellipse:1,0,0,4", 3), Error);
}

TEST_CASE("support table reproduces the tabulated function") {
  Norm e = Norm::ellipse(diag({1, 4, 1}));
  DualNorm d(e);
  SupportTable t(3, 257, [&](const Vec& v) { return d.eval(v); });
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int k = 0; k < 5000; ++k) {
    Vec v = random_vec(rng, 3);
    worst = std::max(worst, rel_err(t.eval(v), d.eval(v)));
  }
  CHECK(worst < 1e-4);
  Norm sampled = Norm::sampled(std::make_shared<SupportTable>(t));
  CHECK(sampled.eval(make_vec({0, 2, 0})) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(sampled.grad(make_vec({0, 2, 0})), Error);
  SupportTable l1(2, 5, [](const Vec& v) { return v.cwiseAbs().sum(); });
  CHECK(l1.eval(make_vec({0.3, -0.9})) == doctest::Approx(1.2).epsilon(1e-14));
}

TEST_CASE("dual Hessian matches finite differences of the dual gradient") {
  std::mt19937_64 rng(21);
  for (int dim : {2, 3}) {
    for (const Norm& phi : smooth_norms(dim)) {
      INFO(phi.spec());
      DualNorm dual(phi);
      for (int k = 0; k < 20; ++k) {
        Vec u = random_vec(rng, dim);
        Mat h = dual.hess(u);
        Mat fd(dim, dim);
        for (int j = 0; j < dim; ++j) {
          Vec a = u, b = u;
          a[j] += 1e-6;
          b[j] -= 1e-6;
          fd.col(j) = (dual.grad(a) - dual.grad(b)) / 2e-6;
        }
        CHECK((h - fd).cwiseAbs().maxCoeff() < 1e-4 * std::max(1.0, h.norm()));
      }
    }
  }
}

TEST_CASE("subgradient of crystalline norms satisfies Euler's identity") {
  std::mt19937_64 rng(31);
  for (const Norm& phi : {Norm::l1(3), Norm::linf(3), Norm::l1(2), Norm::linf(2)}) {
    for (const Vec& v : {make_vec({1, 0, 0}), make_vec({1, 1, 0}), make_vec({-2, 2, 2})}) {
      Vec x = v.head(phi.dim());
      Vec g = phi.subgradient(x);
      CHECK(std::abs(g.dot(x) - phi.eval(x)) < 1e-14);
      // Subgradient inequality phi(y) >= g.y for all y.
      for (int k = 0; k < 100; ++k) {
        Vec y = random_vec(rng, phi.dim());
        CHECK(phi.eval(y) >= g.dot(y) - 1e-14);
      }
    }
  }
  CHECK((Norm::linf(2).subgradient(make_vec({1, -1})) - make_vec({0.5, -0.5})).norm() == 0.0);
}
