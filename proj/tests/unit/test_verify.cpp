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

#include "aniso/verify.hpp"
#include "aniso/wulff.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace aniso;

namespace {

Mat diag(std::initializer_list<double> d) {
  Vec v = make_vec(d);
  return v.asDiagonal();
}

ShapeSpec wulff_spec(const Norm& phi, double r = 1.0) {
  ShapeSpec s;
  s.norm = phi;
  s.radius = r;
  return s;
}

ShapeSpec perturbed_spec(const Norm& phi, double eps) {
  ShapeSpec s = wulff_spec(phi);
  s.kind = ShapeKind::kPerturbedWulff;
  s.epsilon = eps;
  return s;
}

double max_rel(const VerificationReport& r, const std::string& law) {
  double m = 0.0;
  for (const Row& row : r.rows) {
    if (row.law == law) m = std::max(m, row.rel_error);
  }
  return m;
}

bool all_rows_pass(const VerificationReport& r) {
  for (const Row& row : r.rows) {
    if (!row.pass) return false;
  }
  return !r.rows.empty();
}

}  // namespace

TEST_CASE("fit_power_law recovers exponents") {
  std::vector<double> x, y;
  for (double f : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}) {
    x.push_back(1 - f);
    y.push_back(std::pow(1 - f, 3));
  }
  PowerLawFit fit = fit_power_law(x, y);
  CHECK(std::abs(fit.exponent - 3) <= 1e-10);
  CHECK(std::abs(fit.amplitude - 1) <= 1e-10);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> noise(-0.02, 0.02);
  std::vector<double> yn = y;
  for (double& v : yn) v *= 1 + noise(rng);
  CHECK(std::abs(fit_power_law(x, yn).exponent - 3) <= 0.15);

  std::vector<double> yd = y;
  yd[0] = 0.0;
  yd[2] = -1.0;
  std::vector<std::string> notes;
  fit = fit_power_law(x, yd, &notes);
  CHECK(fit.dropped == 2);
  CHECK(!notes.empty());
  CHECK(std::abs(fit.exponent - 3) <= 1e-10);

  yd[3] = 0.0;
  try {
    fit_power_law(x, yd);
    FAIL("expected insufficient-data");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientData);
  }
}

TEST_CASE("Wulff identity") {
  VerificationReport r = check_wulff_identity(Norm::euclidean(3), 1.0);
  CHECK(r.status == Status::kPass);
  CHECK(std::abs(r.rows[0].predicted - 4 * M_PI) <= 1e-2 * 4 * M_PI);

  r = check_wulff_identity(Norm::l1(3), 1.0);
  CHECK(r.status == Status::kPass);
  CHECK(std::abs(r.rows[0].predicted - 24) <= 1e-12);
  CHECK(std::abs(r.rows[0].measured - 24) <= 1e-12);

  r = check_wulff_identity(Norm::smoothed_max(3, 0.1), 2.0);
  CHECK(r.status == Status::kPass);
  CHECK(r.rows[0].rel_error <= 0.015);

  r = check_wulff_identity(Norm::ellipse(diag({1, 4})), 1.0);
  CHECK(r.status == Status::kPass);
  CHECK(std::abs(r.metrics.at("volume") - 2 * M_PI) <= 1e-3);
}

TEST_CASE("erosion laws on exact Wulff shapes") {
  for (const Norm& phi : {Norm::euclidean(3), Norm::ellipse(diag({1, 4, 1})), Norm::smoothed_max(3, 0.1)}) {
    CAPTURE(phi.spec());
    VerificationReport r = check_erosion_laws(wulff_spec(phi));
    CHECK(r.status == Status::kPass);
    CHECK(max_rel(r, "erosion-volume") <= 0.025);
    REQUIRE(r.fit.has_value());
    CHECK(std::abs(r.fit->exponent - 3) <= 0.1);
  }
  for (const Norm& phi : {Norm::euclidean(2), Norm::ellipse(diag({1, 4})), Norm::smoothed_max(2, 0.1)}) {
    CAPTURE(phi.spec());
    VerificationReport r = check_erosion_laws(wulff_spec(phi));
    CHECK(r.status == Status::kPass);
    CHECK(max_rel(r, "erosion-volume") <= 0.015);
    REQUIRE(r.fit.has_value());
    CHECK(std::abs(r.fit->exponent - 2) <= 0.1);
  }
}

TEST_CASE("predicted column does not depend on the grid") {
  ErosionOptions coarse, fine;
  coarse.spacing = 1.0 / 40;
  fine.spacing = 1.0 / 60;
  VerificationReport a = check_erosion_laws(wulff_spec(Norm::euclidean(3)), coarse);
  VerificationReport b = check_erosion_laws(wulff_spec(Norm::euclidean(3)), fine);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].predicted == b.rows[i].predicted);
  }
}

TEST_CASE("deviation ordering on the perturbed family") {
  const Norm phi = Norm::ellipse(diag({1, 4}));
  ErosionOptions opt;
  opt.c_cal = calibrate_erosion(perturbed_spec(phi, 0.1));
  CHECK(*opt.c_cal >= 0.0);
  const double floor = max_rel(check_erosion_laws(wulff_spec(phi)), "erosion-volume");
  double prev_dev = INFINITY, prev_err = INFINITY;
  for (double eps : {0.1, 0.05, 0.025}) {
    CAPTURE(eps);
    VerificationReport r = check_erosion_laws(perturbed_spec(phi, eps), opt);
    CHECK(r.pass());
    const double dev = r.metrics.at("deviation");
    const double err = max_rel(r, "erosion-volume");
    CHECK(dev < prev_dev);
    CHECK(err <= prev_err + floor);
    prev_dev = dev;
    prev_err = err;
  }
}

TEST_CASE("lambda consistency on almost-CMC inputs") {
  const Norm phi = Norm::ellipse(diag({1, 4}));
  for (double eps : {0.05, 0.025}) {
    VerificationReport r = check_erosion_laws(perturbed_spec(phi, eps));
    const double n = 1;
    const double lambda = r.metrics.at("lambda");
    const double vol = r.metrics.at("volume");
    const double per = r.metrics.at("perimeter");
    CHECK(std::abs(lambda * (n + 1) * vol - n * per) <= 1e-9 * per);
  }
}

TEST_CASE("two-bubble with wide neck is gated") {
  ShapeSpec s = wulff_spec(Norm::euclidean(3));
  s.kind = ShapeKind::kTwoBubble;
  s.neck_width = 0.5;
  VerificationReport r = check_erosion_laws(s);
  CHECK(r.metrics.at("deviation") > 1);
  CHECK(r.status == Status::kGated);
  CHECK(r.pass());
}

TEST_CASE("Minkowski law") {
  VerificationReport r = check_minkowski_law(wulff_spec(Norm::euclidean(3)), {{0.2, 0.5}, {0.1, 0.3}});
  CHECK(r.status == Status::kPass);
  CHECK(max_rel(r, "minkowski") <= 0.025);

  r = check_minkowski_law(wulff_spec(Norm::euclidean(3)), {{0.3, 0.9}});
  CHECK(r.status == Status::kPass);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].tolerance > 0.025);

  r = check_minkowski_law(wulff_spec(Norm::euclidean(3)), {{0.5, 0.2}});
  CHECK(r.status == Status::kError);
}

TEST_CASE("disintegration formula") {
  for (const Norm& phi : {Norm::euclidean(3), Norm::ellipse(diag({1, 4, 1}))}) {
    CAPTURE(phi.spec());
    VerificationReport r = check_disintegration(wulff_spec(phi));
    CHECK(r.status == Status::kPass);
    CHECK(max_rel(r, "disintegration") <= 0.03);
  }
  VerificationReport r = check_disintegration(perturbed_spec(Norm::ellipse(diag({1, 4})), 0.05));
  CHECK(r.status == Status::kPass);
  CHECK(max_rel(r, "disintegration") <= 0.05);
}

TEST_CASE("bubbling on the limit configuration") {
  ShapeSpec s = wulff_spec(Norm::euclidean(3));
  s.kind = ShapeKind::kTangentUnion;
  BubblingOptions opt;
  opt.fixed_norm = true;
  VerificationReport r = run_bubbling(SequenceKind::kSmoothMaxToLinf, {1}, s, opt);
  CHECK(r.status == Status::kPass);
  CHECK(r.series.at("count")[0] == 2);
  CHECK(r.series.at("symmetric_difference_rel")[0] <= 0.02);
  CHECK(r.series.at("perimeter_gap_rel")[0] <= 0.02);
  CHECK(std::abs(r.series.at("center_separation")[0] - 2) <= 0.05);
}

TEST_CASE("bubbling on a single perturbed ball") {
  ShapeSpec s = perturbed_spec(Norm::euclidean(3), 0.0);
  VerificationReport r = run_bubbling(SequenceKind::kSmoothMaxToLinf, {4, 5}, s);
  CHECK(r.status == Status::kPass);
  for (double c : r.series.at("count")) CHECK(c == 1);
  for (double c : r.series.at("count_min")) CHECK(c == 1);
  for (double c : r.series.at("count_max")) CHECK(c == 1);
  const auto& gap = r.series.at("perimeter_gap");
  CHECK(gap[1] < gap[0]);

  CHECK(run_bubbling(SequenceKind::kSmoothMaxToLinf, {3, 2}, s).status == Status::kError);
  CHECK(run_bubbling(SequenceKind::kSmoothMaxToLinf, {}, s).status == Status::kError);
}

TEST_CASE("report serialization") {
  VerificationReport a = check_erosion_laws(wulff_spec(Norm::euclidean(2)));
  VerificationReport b = check_erosion_laws(wulff_spec(Norm::euclidean(2)));
  const std::string ja = report_json(a);
  CHECK(ja == report_json(b));
  CHECK(ja.find("\"status\"") != std::string::npos);
  CHECK(ja.find("wall") == std::string::npos);

  const std::string csv = report_csv(a);
  std::size_t lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == a.rows.size() + 1);

  const std::string svg = erosion_svg(a);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  VerificationReport e = check_minkowski_law(wulff_spec(Norm::euclidean(2)), {{0.5, 0.2}});
  CHECK(report_json(e).find("invalid-argument") != std::string::npos);

  VerificationReport nan = a;
  nan.metrics["bad"] = NAN;
  CHECK(report_json(nan).find("\"bad\": null") != std::string::npos);
}
