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

#include <cstdint>
#include <vector>

#include "aniso/dual_norm.hpp"
#include "aniso/mesh.hpp"
#include "aniso/norm.hpp"

namespace aniso {

struct Halfspace {
  Vec normal;  // unit, outward
  double offset = 0.0;
};

// Exact convex polytope: W of a crystalline norm.
struct Polytope {
  int dim = 3;
  std::vector<Vec> vertices;
  std::vector<Halfspace> halfspaces;
  // faces[i] lists the vertices of the facet on halfspaces[i],
  // counterclockwise seen from outside (a segment in 2D).
  std::vector<std::vector<int>> faces;

  bool contains(const Vec& x, double slack = 0.0) const;
  double facet_area(std::size_t i) const;
  double volume() const;
  // Sum over facets of area * phi(facet normal).
  double perimeter(const Norm& phi) const;
  // Fan-triangulated boundary with shared vertices.
  TriSurface surface() const;
};

Polytope crystalline_polytope(const Norm& phi, double r);

inline constexpr int kDefaultSphereLevel = 5;
inline constexpr int kDefaultCircleCount = 4096;
int default_resolution(int dim);

// W^phi_r = {x : phi°(x) <= r}.
class WulffShape {
 public:
  WulffShape(Norm phi, double r);

  const Norm& norm() const { return norm_; }
  const DualNorm& dual() const { return dual_; }
  double radius() const { return radius_; }
  int dim() const { return norm_.dim(); }
  bool is_crystalline() const { return norm_.is_crystalline(); }

  bool contains(const Vec& x, double slack = 0.0) const;
  // Vertices r * grad phi(u_k) over icosphere(resolution) or a regular
  // resolution-gon; normals u_k. Non-positive resolution selects the default.
  TriSurface boundary_mesh(int resolution = 0) const;
  Polytope polytope() const;

 private:
  Norm norm_;
  DualNorm dual_;
  double radius_;
};

enum class VolumeMethod { kMeshDivergence, kMonteCarlo };

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct VolumeOptions {
  VolumeMethod method = VolumeMethod::kMeshDivergence;
  int resolution = 0;
  std::int64_t samples = 1000000;
  std::uint64_t seed = 1;
};

// Crystalline shapes always use exact polytope arithmetic.
VolumeEstimate wulff_volume(const WulffShape& w, const VolumeOptions& options = {});
double wulff_perimeter(const WulffShape& w, int resolution = 0);

// Fraction-of-box Monte Carlo volume of an arbitrary membership predicate.
VolumeEstimate monte_carlo_volume(const std::function<bool(const Vec&)>& inside,
                                  const Vec& lo, const Vec& hi, std::int64_t samples,
                                  std::uint64_t seed);

}  // namespace aniso
