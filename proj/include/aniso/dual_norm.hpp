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

#include <memory>

#include "aniso/norm.hpp"

namespace aniso {

enum class DualMethod {
  kAutomatic,  // closed form when the family has one, ascent otherwise
  kAscent,     // always run the projected-ascent solver
};

struct DualSolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 500;
  int restarts = 8;
  double min_step = 1e-12;
  // Maximizers from distinct restarts farther apart than this are reported as
  // non-unique.
  double uniqueness_tolerance = 1e-6;
  DualMethod method = DualMethod::kAutomatic;
};

// phi°(u) = sup{u . v : phi(v) <= 1} and its maximizer grad phi°(u).
// Safe for concurrent use; the warm-start cache is lock-protected.
class DualNorm {
 public:
  explicit DualNorm(Norm base, DualSolverOptions options = {});

  const Norm& base() const { return base_; }
  const DualSolverOptions& options() const { return options_; }
  int dim() const { return base_.dim(); }

  double eval(const Vec& u) const;
  double operator()(const Vec& u) const { return eval(u); }
  // The unique v with phi(v) = 1 and u . v = phi°(u).
  Vec grad(const Vec& u) const;
  // Through the Legendre pair (phi^2 / 2, phi°^2 / 2); needs base.hess.
  Mat hess(const Vec& u) const;

  // phi° as a Norm: closed-form family where one exists, custom otherwise.
  Norm as_norm() const;

  struct Cache;

 private:
  struct AscentResult {
    Vec v;
    double value;
    double gap;
    bool converged;
  };
  AscentResult ascend(const Vec& u, const Vec& start) const;
  void polish(const Vec& u, AscentResult* r) const;
  double ball_radius() const;
  bool has_closed_form() const;
  std::vector<Vec> starts() const;

  Norm base_;
  DualSolverOptions options_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace aniso
