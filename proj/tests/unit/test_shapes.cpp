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

#include "aniso/grid.hpp"
#include "aniso/shapes.hpp"
#include "aniso/wulff.hpp"
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

ShapeSpec perturbed(const Norm& phi, double r, double eps, int pattern = 0) {
  ShapeSpec s;
  s.kind = ShapeKind::kPerturbedWulff;
  s.norm = phi;
  s.radius = r;
  s.epsilon = eps;
  s.pattern = pattern;
  return s;
}

ShapeSpec bubble(const Norm& phi, double r, double neck) {
  ShapeSpec s;
  s.kind = ShapeKind::kTwoBubble;
  s.norm = phi;
  s.radius = r;
  s.neck_width = neck;
  return s;
}

double max_vertex_gap(const TriSurface& a, const TriSurface& b) {
  double gap = 0.0;
  for (std::size_t v = 0; v < a.vertices.size(); ++v) gap = std::max(gap, (a.vertices[v] - b.vertices[v]).norm());
  return gap;
}

}  // namespace

TEST_CASE("wulff kind reproduces the boundary mesh") {
  for (const Norm& phi : {Norm::euclidean(3), Norm::ellipse(diag({1, 4, 1})), Norm::smoothed_max(3, 0.1),
                          Norm::smoothed_max(2, 0.1)}) {
    ShapeSpec s;
    s.norm = phi;
    s.radius = 1.5;
    const TriSurface a = gen(s, 3);
    const TriSurface b = WulffShape(phi, 1.5).boundary_mesh(3);
    REQUIRE(a.vertices.size() == b.vertices.size());
    CHECK(a.faces == b.faces);
    CHECK(max_vertex_gap(a, b) <= 1e-12);
  }
  ShapeSpec cube;
  cube.norm = Norm::l1(3);
  CHECK(enclosed_volume(gen(cube)) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("zero perturbation is the exact wulff shape") {
  for (const Norm& phi : {Norm::ellipse(diag({1, 4, 1})), Norm::smoothed_max(3, 0.2), Norm::ellipse(diag({1, 4}))}) {
    const TriSurface a = gen(perturbed(phi, 1.2, 0.0), 3);
    const TriSurface b = WulffShape(phi, 1.2).boundary_mesh(3);
    CHECK(max_vertex_gap(a, b) <= 1e-12);
    double worst = 0.0;
    for (std::size_t v = 0; v < a.normals.size(); ++v) worst = std::max(worst, (a.normals[v] - b.normals[v]).norm());
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("perturbed vertices follow the radial law") {
  const Norm phi = Norm::ellipse(diag({1, 2.25, 0.64}));
  const ShapeSpec s = perturbed(phi, 1.0, 0.1, -1);
  const TriSurface m = gen(s, 3);
  const TriSurface sphere = unit_sphere(3, 3);
  DualNorm dual(phi);
  for (std::size_t v = 0; v < m.vertices.size(); v += 17) {
    const Vec u = sphere.vertices[v];
    const double y = pattern_value(3, -1, s.seed, u);
    CHECK((m.vertices[v] - (1 + 0.1 * y) * phi.grad(u)).norm() <= 1e-12);
    CHECK(dual.eval(m.vertices[v]) == doctest::Approx(1 + 0.1 * y).epsilon(1e-10));
  }
  // Analytic normals agree with the face-averaged ones.
  TriSurface avg = m;
  compute_vertex_normals(&avg);
  double worst = 0.0;
  for (std::size_t v = 0; v < m.normals.size(); ++v) worst = std::max(worst, 1 - m.normals[v].dot(avg.normals[v]));
  CHECK(worst <= 1e-3);
}

TEST_CASE("patterns are bounded and their gradients match differences") {
  std::mt19937_64 rng(4);
  for (int dim : {2, 3}) {
    for (int pattern = -1; pattern < 4; ++pattern) {
      double top = 0.0;
      for (int k = 0; k < 4000; ++k) {
        const Vec u = random_vec(rng, dim, 1.0).normalized();
        const double y = pattern_value(dim, pattern, 9, u);
        CHECK(std::abs(y) <= 1 + 1e-12);
        top = std::max(top, std::abs(y));
        if (k % 200 == 0) {
          const Vec g = pattern_gradient(dim, pattern, 9, u);
          for (int a = 0; a < dim; ++a) {
            Vec e = Vec::Zero(dim);
            e[a] = 1e-6;
            const double fd = (pattern_value(dim, pattern, 9, u + e) - pattern_value(dim, pattern, 9, u - e)) / 2e-6;
            CHECK(fd == doctest::Approx(g[a]).epsilon(1e-6).scale(1.0));
          }
        }
      }
      if (pattern >= 0) CHECK(top >= 0.95);
    }
  }
  const Vec u = make_vec({0.3, -0.4, 0.866}).normalized();
  CHECK(pattern_value(3, -1, 5, u) == pattern_value(3, -1, 5, u));
  CHECK(pattern_value(3, -1, 5, u) != pattern_value(3, -1, 6, u));
}

TEST_CASE("shape specs round trip through text") {
  const Norm def = Norm::euclidean(3);
  for (const char* text : {"wulff norm=ellipse:1,0,0,0,4,0,0,0,1 r=1.5", "perturbed-wulff norm=smoothmax:0.1 r=2 eps=0.05 pattern=-1 seed=7",
                           "two-bubble norm=smoothmax:0.1 r=1.5 neck=0.1", "tangent-union r=1 count=3",
                           "tangent-union dim=2 r=0.5 centers=0,0;1,0", "wulff dim=2 norm=linf"}) {
    const ShapeSpec a = parse_shape_spec(text, def);
    const ShapeSpec b = parse_shape_spec(a.to_string(), def);
    CHECK(a.to_string() == b.to_string());
    CHECK(a.kind == b.kind);
    CHECK(a.radius == b.radius);
    CHECK(a.dim() == b.dim());
  }
  const ShapeSpec t = parse_shape_spec("two-bubble r=1.5 neck=0.1", Norm::smoothed_max(3, 0.1));
  CHECK(t.norm.spec() == Norm::smoothed_max(3, 0.1).spec());
  CHECK(t.neck_width == 0.1);

  auto code = [&](const char* text) {
    try {
      parse_shape_spec(text, def);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code("ball r=1") == ErrorCode::kInvalidSpec);
  CHECK(code("wulff radius=1") == ErrorCode::kUnknownKey);
  CHECK(code("wulff r=abc") == ErrorCode::kParse);
  CHECK(code("wulff r") == ErrorCode::kParse);
  CHECK(code("") == ErrorCode::kParse);
  CHECK(code("wulff r=-1") == ErrorCode::kInvalidSpec);
  CHECK(code("perturbed-wulff eps=0.3") == ErrorCode::kInvalidSpec);
  CHECK(code("perturbed-wulff eps=0.1 pattern=4") == ErrorCode::kInvalidSpec);
  CHECK(code("perturbed-wulff norm=l1 eps=0.1") == ErrorCode::kInvalidSpec);
  CHECK(code("two-bubble r=1 neck=0.6") == ErrorCode::kInvalidSpec);
  CHECK(code("two-bubble r=1") == ErrorCode::kInvalidSpec);
  CHECK(code("two-bubble norm=linf r=1 neck=0.1") == ErrorCode::kInvalidSpec);
  CHECK(code("tangent-union r=1 centers=0,0,0;1,0,0") == ErrorCode::kInvalidSpec);
  CHECK(code("tangent-union r=1 centers=0,0;1,0") == ErrorCode::kParse);
  CHECK(code("wulff dim=4") == ErrorCode::kInvalidSpec);
}

TEST_CASE("tangent union centers are 2r apart") {
  for (const Norm& phi : {Norm::euclidean(3), Norm::ellipse(diag({1, 4, 1})), Norm::smoothed_max(3, 0.1), Norm::l1(3),
                          Norm::smoothed_max(2, 0.05)}) {
    ShapeSpec s;
    s.kind = ShapeKind::kTangentUnion;
    s.norm = phi;
    s.radius = 0.7;
    s.count = 3;
    const auto cs = shape_centers(s);
    REQUIRE(cs.size() == 3);
    DualNorm dual(phi);
    for (std::size_t i = 0; i < cs.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) CHECK(dual.eval(cs[i] - cs[j]) >= 2 * 0.7 * (1 - 1e-12));
    }
    CHECK(dual.eval(cs[1] - cs[0]) == doctest::Approx(1.4).epsilon(1e-12));
    const int level = phi.dim() == 3 ? 4 : 0;
    ShapeSpec one = s;
    one.kind = ShapeKind::kWulff;
    CHECK(enclosed_volume(gen(s, level)) == doctest::Approx(3 * enclosed_volume(gen(one, level))).epsilon(1e-9));
  }
}

TEST_CASE("lambda calibration on wulff shapes") {
  for (const Norm& phi : {Norm::euclidean(3), Norm::ellipse(diag({1, 4, 1})), Norm::smoothed_max(3, 0.1)}) {
    ShapeSpec s;
    s.norm = phi;
    s.radius = 1.5;
    const double lambda = 2 / 1.5;
    double prev = kInf;
    for (int level = 4; level <= 6; ++level) {
      const TriSurface m = gen(s, level);
      if (level == 6) CHECK(rel_err(lambda_of(m, phi), lambda) <= 0.01);
      // Deviation relative to lambda * |dS|^{1/n}, the deviation of H = 0.
      const double dev = lp_deviation(curvature(m, phi), m, lambda, 2) / (lambda * std::sqrt(area(m)));
      CHECK(dev < 0.5 * prev);
      prev = dev;
    }
    CHECK(prev <= (phi.spec().rfind("smoothmax", 0) == 0 ? 0.03 : 1e-3));
  }
}

TEST_CASE("perturbed family deviation halves with eps") {
  for (const Norm& phi : {Norm::ellipse(diag({1, 4, 1})), Norm::smoothed_max(3, 0.2), Norm::ellipse(diag({1, 4}))}) {
    const int dim = phi.dim();
    double prev = kInf;
    for (double eps : {0.1, 0.05, 0.025, 0.0125}) {
      const TriSurface m = gen(perturbed(phi, 1.0, eps), dim == 3 ? 5 : 0);
      const double dev = lp_deviation(curvature(m, phi), m, dim - 1.0, dim - 1.0);
      CHECK(dev < prev);
      prev = dev;
    }
  }
}

TEST_CASE("two-bubble volume approaches two balls") {
  for (const Norm& phi : {Norm::euclidean(3), Norm::ellipse(diag({1, 2.25, 0.64})), Norm::euclidean(2),
                          Norm::ellipse(diag({1, 4}))}) {
    const double ball = wulff_volume(WulffShape(phi, 1.0)).value;
    double prev = kInf;
    for (double neck : {0.25, 0.125, 0.0625}) {
      const TriSurface m = gen(bubble(phi, 1.0, neck));
      const double ratio = enclosed_volume(m) / (2 * ball);
      CHECK(ratio > 1.0 - 2e-3);
      CHECK(ratio < prev);
      prev = ratio;
    }
    CHECK(prev - 1 <= 0.01);
  }
  const TriSurface m = gen(bubble(Norm::smoothed_max(3, 0.1), 1.0, 0.0625));
  CHECK(rel_err(enclosed_volume(m), 2 * wulff_volume(WulffShape(Norm::smoothed_max(3, 0.1), 1.0)).value) <= 0.01);
}

TEST_CASE("two-bubble neck geometry") {
  const ShapeSpec s = bubble(Norm::euclidean(3), 1.0, 0.125);
  const TwoBubble tb(s, 64);
  CHECK(tb.stretch == 1.0);
  CHECK(tb.gap > 0);
  CHECK(tb.c2[0] == doctest::Approx(1 + tb.gap / 2));
  DualNorm dual(s.norm);
  for (const auto& sec : tb.sections) {
    CHECK(sec.waist == doctest::Approx(0.0625).epsilon(1e-6));
    // The neck meets the ball on its surface, with matching slope.
    const Vec attach = sec.attach_s * unit_vec(3, 0) + sec.attach_rho * tb.radial(sec.theta);
    CHECK(dual.eval(attach - tb.c2) == doctest::Approx(1.0).epsilon(1e-5));
    const double neck_slope = std::sinh(sec.attach_s / sec.length) * sec.waist / sec.length;
    const Vec n = dual.grad(attach - tb.c2);
    const double ball_slope = -n[0] / n.tail(2).norm();
    CHECK(neck_slope == doctest::Approx(ball_slope).epsilon(1e-3));
  }
  CHECK(tb.contains(Vec::Zero(3)));
  CHECK(tb.contains(make_vec({0, 0.0624, 0})));
  CHECK_FALSE(tb.contains(make_vec({0, 0.0626, 0})));
  CHECK_FALSE(tb.contains(make_vec({0, 0, -0.07})));

  // Normals point away from the nearest center and the waist is where asked.
  const TriSurface m = gen(s, 64);
  double waist = kInf;
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    const Vec& x = m.vertices[v];
    if (std::abs(x[0]) > 0.3) CHECK(m.normals[v].dot(x - (x[0] < 0 ? tb.c1 : tb.c2)) > 0);
    if (std::abs(x[0]) < 1e-12) waist = std::min(waist, x.tail(2).norm());
  }
  CHECK(waist == doctest::Approx(0.0625).epsilon(1e-9));

  // Smoothmax tips are too steep for a catenoid.
  const TwoBubble sharp(bubble(Norm::smoothed_max(3, 0.0625), 1.0, 0.0625), 32);
  CHECK(sharp.stretch > 1.0);
  CHECK(sharp.sections[0].waist == doctest::Approx(0.03125));
}

TEST_CASE("two-bubble needs a mirror-symmetric norm") {
  Mat q = diag({1, 2, 1});
  q(0, 1) = q(1, 0) = 0.5;
  CHECK_THROWS_AS(gen(bubble(Norm::ellipse(q), 1.0, 0.1)), Error);
  try {
    gen(bubble(Norm::ellipse(q), 1.0, 0.1));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidSpec);
  }
  Mat ok = diag({1, 2, 1});
  ok(1, 2) = ok(2, 1) = 0.5;
  CHECK_NOTHROW(TwoBubble(bubble(Norm::ellipse(ok), 1.0, 0.1), 32));
}

TEST_CASE("regions agree with meshes") {
  struct Case {
    ShapeSpec spec;
    double h;
    double tol;
  };
  std::vector<Case> cases = {
      {bubble(Norm::euclidean(2), 1.0, 0.25), 0.01, 0.01},
      {bubble(Norm::ellipse(diag({1, 4})), 1.0, 0.25), 0.01, 0.01},
      {perturbed(Norm::ellipse(diag({1, 4})), 1.0, 0.1, 1), 0.01, 0.01},
      {bubble(Norm::euclidean(3), 1.0, 0.25), 0.04, 0.02},
      {perturbed(Norm::ellipse(diag({1, 2.25, 0.64})), 1.0, 0.1, -1), 0.04, 0.02},
  };
  for (const Case& c : cases) {
    const double mesh = enclosed_volume(gen(c.spec));
    const double grid = volume(rasterize(region(c.spec), c.h));
    CHECK(rel_err(grid, mesh) <= c.tol);
  }
}

TEST_CASE("norm sequences") {
  SUBCASE("smoothmax bound") {
    const Vec v = make_vec({1, 0.5, -0.2});
    const Norm phi = norm_sequence(SequenceKind::kSmoothMaxToLinf, 10);
    CHECK(std::abs(phi.eval(v) - 1.0) <= 3 * std::ldexp(1.0, -10) * std::log(6.0));
    CHECK(sequence_limit(SequenceKind::kSmoothMaxToLinf).eval(v) == 1.0);
  }
  SUBCASE("lp decreases") {
    const Vec v = make_vec({1, 1, 0});
    double prev = kInf;
    for (int h = 1; h <= 12; ++h) {
      const double x = norm_sequence(SequenceKind::kLpToLinf, h).eval(v);
      CHECK(x < prev);
      CHECK(x > 1.0);
      prev = x;
    }
  }
  SUBCASE("pointwise cauchy") {
    std::mt19937_64 rng(3);
    for (auto kind : {SequenceKind::kSmoothMaxToLinf, SequenceKind::kLpToLinf}) {
      for (int k = 0; k < 20; ++k) {
        const Vec v = random_vec(rng, 3, 1.0);
        const double limit = v.cwiseAbs().maxCoeff();
        for (int h = 2; h <= 14; h += 4) {
          const double a = norm_sequence(kind, h).eval(v), b = norm_sequence(kind, h + 1).eval(v);
          CHECK(std::abs(b - limit) <= std::abs(a - limit) + 1e-14);
        }
      }
    }
  }
  SUBCASE("uniform comparability constants") {
    for (auto kind : {SequenceKind::kSmoothMaxToLinf, SequenceKind::kLpToLinf}) {
      for (int h = 1; h <= 20; ++h) {
        const NormBounds b = norm_bounds(norm_sequence(kind, h), 500);
        CHECK(b.lower >= 1 / std::sqrt(3.0) - 1e-12);
        CHECK(b.upper <= std::sqrt(3.0) + 1e-12);
        CHECK(b.dual_lower >= 1 - 1e-9);
        CHECK(b.dual_upper <= std::sqrt(3.0) * std::sqrt(3.0) + 1e-9);
        CHECK(b.lower * b.dual_lower <= 1 + 1e-9);
      }
    }
  }
  CHECK(parse_sequence_kind("smoothed-max-to-linf") == SequenceKind::kSmoothMaxToLinf);
  CHECK(parse_sequence_kind(to_string(SequenceKind::kLpToLinf)) == SequenceKind::kLpToLinf);
  CHECK_THROWS_AS(parse_sequence_kind("l2"), Error);
  CHECK_THROWS_AS(norm_sequence(SequenceKind::kLpToLinf, 0), Error);
}
