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

#include "aniso/support_table.hpp"

#include <algorithm>
#include <cmath>

namespace aniso {

namespace {

// Face f: major axis f / 2, sign + for even f. The remaining axes in
// increasing order give the (a, b) face coordinates.
void other_axes(int dim, int axis, int* j, int* k) {
  if (dim == 2) {
    *j = 1 - axis;
    *k = -1;
    return;
  }
  *j = axis == 0 ? 1 : 0;
  *k = axis == 2 ? 1 : 2;
}

}  // namespace

SupportTable::SupportTable(int dim, int nodes,
                           const std::function<double(const Vec&)>& f)
    : dim_(dim), nodes_(nodes) {
  if (dim != 2 && dim != 3) {
    throw Error(ErrorCode::kInvalidArgument, "support table needs dim 2 or 3");
  }
  if (nodes < 3 || nodes % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "support table node count must be odd and >= 3");
  }
  const int per_face = dim == 2 ? nodes : nodes * nodes;
  values_.resize(static_cast<std::size_t>(faces()) * per_face);
  for (int face = 0; face < faces(); ++face) {
    for (int j = 0; j < (dim == 2 ? 1 : nodes); ++j) {
      for (int i = 0; i < nodes; ++i) {
        values_[static_cast<std::size_t>(face) * per_face + j * nodes + i] =
            f(node_point(face, i, j));
      }
    }
  }
}

Vec SupportTable::node_point(int face, int i, int j) const {
  const int axis = face / 2;
  const double sign = face % 2 == 0 ? 1.0 : -1.0;
  int ja, ka;
  other_axes(dim_, axis, &ja, &ka);
  Vec p = Vec::Zero(dim_);
  p[axis] = sign;
  const double scale = 2.0 / (nodes_ - 1);
  p[ja] = -1.0 + scale * i;
  if (dim_ == 3) p[ka] = -1.0 + scale * j;
  return p;
}

double SupportTable::eval(const Vec& v) const {
  return eval(v[0], v[1], dim_ == 3 ? v[2] : 0.0);
}

double SupportTable::eval(double x, double y, double z) const {
  const double ax = std::abs(x), ay = std::abs(y), az = std::abs(z);
  int axis;
  double major;
  if (dim_ == 2) {
    axis = ax >= ay ? 0 : 1;
    major = axis == 0 ? x : y;
  } else if (ax >= ay && ax >= az) {
    axis = 0;
    major = x;
  } else if (ay >= az) {
    axis = 1;
    major = y;
  } else {
    axis = 2;
    major = z;
  }
  const double m = std::abs(major);
  if (m == 0.0) return 0.0;
  const int face = 2 * axis + (major < 0.0 ? 1 : 0);
  const double c[3] = {x, y, z};
  int ja, ka;
  other_axes(dim_, axis, &ja, &ka);
  const double half = 0.5 * (nodes_ - 1);
  double ga = (c[ja] / m + 1.0) * half;
  int ia = std::clamp(static_cast<int>(ga), 0, nodes_ - 2);
  double ta = ga - ia;
  if (dim_ == 2) {
    const double* row = values_.data() + static_cast<std::size_t>(face) * nodes_;
    return m * (row[ia] * (1.0 - ta) + row[ia + 1] * ta);
  }
  double gb = (c[ka] / m + 1.0) * half;
  int ib = std::clamp(static_cast<int>(gb), 0, nodes_ - 2);
  double tb = gb - ib;
  const double* base = values_.data() +
                       static_cast<std::size_t>(face) * nodes_ * nodes_ +
                       static_cast<std::size_t>(ib) * nodes_ + ia;
  const double v00 = base[0], v10 = base[1];
  const double v01 = base[nodes_], v11 = base[nodes_ + 1];
  return m * ((v00 * (1.0 - ta) + v10 * ta) * (1.0 - tb) +
              (v01 * (1.0 - ta) + v11 * ta) * tb);
}

}  // namespace aniso
