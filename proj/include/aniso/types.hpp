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

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace aniso {

// Ambient vectors live in R^2 or R^3. Fixed maximum size keeps them on the
// stack while the dimension stays a runtime property.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                          Eigen::ColMajor, 3, 3>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  kInvalidArgument,
  kSingularPoint,
  kUnsupportedOperation,
  kConvergence,
  kNonUniqueMaximizer,
  kInvalidMesh,
  kOrientation,
  kMargin,
  kAllInfinite,
  kGeometry,
  kInsufficientData,
  kParse,
  kUnknownKey,
  kInvalidSpec,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised when the dual-norm ascent exhausts its iteration budget. Carries the
// best objective found and an upper bound on the remaining gap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best, double gap)
      : Error(ErrorCode::kConvergence, what), best_(best), gap_(gap) {}
  double best_value() const { return best_; }
  double gap_bound() const { return gap_; }

 private:
  double best_;
  double gap_;
};

inline bool all_finite(const Vec& v) { return v.array().isFinite().all(); }

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vec zero_vec(int dim) { return Vec::Zero(dim); }

inline Vec cross3(const Vec& a, const Vec& b) {
  return make_vec({a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                   a[0] * b[1] - a[1] * b[0]});
}

inline Vec unit_vec(int dim, int axis) {
  Vec v = Vec::Zero(dim);
  v[axis] = 1.0;
  return v;
}

}  // namespace aniso
