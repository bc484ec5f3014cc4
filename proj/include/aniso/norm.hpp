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

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "aniso/types.hpp"

namespace aniso {

enum class NormFamily {
  kEuclidean,
  kWeightedLp,
  kEllipse,
  kSmoothMax,
  kL1,
  kLinf,
  kCustom,
  kSampled,
};

const char* to_string(NormFamily family);

class SupportTable;

// User-supplied norm. Only `eval` is mandatory; missing derivatives fall back
// to central differences (hess only when strictly_convex is set).
struct CustomNorm {
  std::string name = "custom";
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
  bool strictly_convex = true;
};

// An anisotropy phi on R^{n+1}, n+1 in {2,3}. Immutable; copies share state.
class Norm {
 public:
  static Norm euclidean(int dim);
  static Norm lp(int dim, double p, std::vector<double> weights = {});
  static Norm ellipse(const Mat& q);
  // Gauge of the sublevel set {LSE_eps <= LSE_eps(e1)}, LSE_eps(w) =
  // eps*log(sum_i exp(w_i/eps) + exp(-w_i/eps)). phi(e_i) = 1, -> linf.
  static Norm smoothed_max(int dim, double eps);
  static Norm l1(int dim);
  static Norm linf(int dim);
  static Norm custom(int dim, CustomNorm fns);
  static Norm sampled(std::shared_ptr<const SupportTable> table);

  int dim() const;
  NormFamily family() const;
  // grad and hess are closed-form (no finite differences).
  bool analytic_derivatives() const;
  // C^2 away from the origin.
  bool is_smooth() const;
  bool is_crystalline() const;
  bool is_strictly_convex() const;
  // Canonical string in the config grammar; custom norms report their name.
  std::string spec() const;

  // Family parameters, meaningful only for the matching family.
  double p() const;
  double eps() const;
  const std::vector<double>& weights() const;
  const Mat& matrix() const;

  double eval(const Vec& v) const;
  double operator()(const Vec& v) const { return eval(v); }
  Vec grad(const Vec& v) const;
  Mat hess(const Vec& v) const;
  // grad where it exists; otherwise the centroid of the subdifferential
  // (l1 and linf only).
  Vec subgradient(const Vec& v) const;

  struct Impl;

 private:
  explicit Norm(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
  const Impl& impl() const { return *impl_; }
};

// `euclidean`, `lp:<p>[:w1,w2,...]`, `ellipse:<q11,q12,...>` (row-major,
// n^2 entries), `smoothmax:<eps>`, `l1`, `linf`. `dim` is required for the
// families whose spec does not fix it; pass 0 to infer from ellipse/lp.
Norm parse_norm(std::string_view spec, int dim);

// Orthonormal basis of lin{n}^perp as the columns of a dim x (dim-1) matrix.
Mat tangent_basis(const Vec& n);

// Quasi-uniform directions on the unit sphere: uniform angles in 2D,
// Fibonacci spiral in 3D.
std::vector<Vec> sphere_samples(int dim, int count);

struct ConvexityCertificate {
  double gamma = 0.0;
  int sample_count = 0;
  Vec min_location;
};

// gamma = min over sampled u of the least eigenvalue of D^2 phi(u) on u^perp.
ConvexityCertificate convexity_certificate(const Norm& norm, int samples);

struct SphereExtremes {
  double min = kInf;
  double max = 0.0;
};

// min and max of f over sampled unit directions.
SphereExtremes sphere_extremes(const std::function<double(const Vec&)>& f,
                               int dim, int samples);

}  // namespace aniso
