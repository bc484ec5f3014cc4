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

#include "aniso/types.hpp"

namespace aniso::detail {

// Log-sum-exp level-set machinery behind Norm::smoothed_max.
//   F(w) = eps * log(sum_i exp(w_i/eps) + exp(-w_i/eps))
// The norm is the gauge of {F <= F(e1)}.
class SmoothMax {
 public:
  SmoothMax() = default;
  SmoothMax(int dim, double eps);

  double level() const { return level_; }
  double lse(const Vec& w) const;
  // Gradient and Hessian of F.
  void lse_derivatives(const Vec& w, Vec* grad, Mat* hess) const;

  double gauge(const Vec& v) const;
  Vec gauge_grad(const Vec& v) const;
  Mat gauge_hess(const Vec& v) const;

  // sup{x . v : F(v) <= level}; writes the maximizer when requested.
  double support(const Vec& x, Vec* maximizer) const;

 private:
  int dim_ = 0;
  double eps_ = 0.0;
  double level_ = 0.0;
};

}  // namespace aniso::detail
