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
#include <vector>

#include "aniso/types.hpp"

namespace aniso {

// Tabulated 1-homogeneous function. Values are stored on the surface of the
// unit cube (square in 2D), `nodes` per face axis (odd, so the coordinate
// planes are grid lines), and interpolated (bi)linearly; f(v) is
// ||v||_inf * T(face, v / ||v||_inf).
class SupportTable {
 public:
  SupportTable(int dim, int nodes, const std::function<double(const Vec&)>& f);

  int dim() const { return dim_; }
  int nodes() const { return nodes_; }
  int faces() const { return 2 * dim_; }
  const std::vector<double>& values() const { return values_; }

  double eval(const Vec& v) const;
  double eval(double x, double y, double z) const;

  // Direction of table node (face, i, j) on the cube surface.
  Vec node_point(int face, int i, int j) const;

 private:
  int dim_;
  int nodes_;
  std::vector<double> values_;  // face-major, then j, then i
};

}  // namespace aniso
