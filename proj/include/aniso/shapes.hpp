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
#include <string>
#include <string_view>
#include <vector>

#include "aniso/grid.hpp"
#include "aniso/mesh.hpp"
#include "aniso/norm.hpp"

namespace aniso {

enum class ShapeKind { kWulff, kPerturbedWulff, kTwoBubble, kTangentUnion };

const char* to_string(ShapeKind kind);

struct ShapeSpec {
  ShapeKind kind = ShapeKind::kWulff;
  Norm norm = Norm::euclidean(3);
  double radius = 1.0;
  double epsilon = 0.0;
  // Perturbation mode, 0..3; -1 mixes all modes with weights drawn from seed.
  int pattern = 0;
  double neck_width = 0.0;
  int count = 2;
  // Tangent-union centers; empty means `count` balls in a row along e1.
  std::vector<Vec> centers;
  std::uint64_t seed = 1;

  int dim() const { return norm.dim(); }
  // Throws invalid-spec when an invariant fails.
  void validate() const;
  // Round-trips through parse_shape_spec.
  std::string to_string() const;
};

// "two-bubble norm=smoothmax:0.1 r=1.5 neck=0.1". Keys: norm, dim, r, eps,
// pattern, neck, count, centers (x,y[,z];...), seed. Without norm= the
// default norm is used.
ShapeSpec parse_shape_spec(std::string_view text, const Norm& default_norm);

// Boundary mesh. Resolution is the icosphere level in 3D and the polygon
// vertex count in 2D for Wulff-type kinds; for two-bubble it is the number
// of azimuthal columns (3D) or vertices per cap (2D). Non-positive selects
// defaults.
TriSurface gen(const ShapeSpec& spec, int resolution = 0);
// Membership set of the same shape, for rasterization.
SetExpr region(const ShapeSpec& spec);
// Centers of the limit Wulff balls: one for Wulff kinds, two for two-bubble.
std::vector<Vec> shape_centers(const ShapeSpec& spec);

// Perturbation pattern Y on the unit sphere and its ambient gradient;
// |Y| <= 1.
double pattern_value(int dim, int pattern, std::uint64_t seed, const Vec& u);
Vec pattern_gradient(int dim, int pattern, std::uint64_t seed, const Vec& u);

// Two Wulff balls c_i + W_r joined by a catenary neck. In each half-plane
// {s e1 + rho d(theta)} the neck is rho = a cosh(s / (k a)) for |s| <= s*,
// touching both balls tangentially at (s*, rho*); the balls sit a gap g
// apart so that the waist diameter along e2 is neck_width. The stretch k is
// 1 (a catenoid) unless the ball tips are too steep for one. Needs a norm
// symmetric under x1 -> -x1.
struct TwoBubble {
  struct Section {
    double theta = 0.0;
    double waist = 0.0;      // a
    double length = 0.0;     // k a
    double attach_s = 0.0;   // s*
    double attach_rho = 0.0; // rho*
  };

  Vec c1, c2;
  double radius = 1.0;
  double gap = 0.0;
  double stretch = 1.0;
  DualNorm dual;
  // Evenly spaced in theta over [0, 2 pi) in 3D; theta = 0 (+e2) and pi (-e2) in 2D.
  std::vector<Section> sections;

  TwoBubble(const ShapeSpec& spec, int columns = 0);
  int dim() const { return dual.dim(); }
  // Direction d(theta) orthogonal to e1.
  Vec radial(double theta) const;
  Section section_at(double theta) const;
  bool contains(const Vec& x) const;
};

enum class SequenceKind { kSmoothMaxToLinf, kLpToLinf };

const char* to_string(SequenceKind kind);
SequenceKind parse_sequence_kind(std::string_view text);
// phi_h: smoothmax with eps = 2^-h, or lp with p = 2^h. h >= 1.
Norm norm_sequence(SequenceKind kind, int h, int dim = 3);
Norm sequence_limit(SequenceKind kind, int dim = 3);

// Extremes of phi and phi° over unit vectors (lattice of directions plus
// seeded random samples): C' |v| <= phi(v) <= C |v|, C1 |v| <= phi°(v) <= C2 |v|.
struct NormBounds {
  double lower = 0.0;
  double upper = 0.0;
  double dual_lower = 0.0;
  double dual_upper = 0.0;
};
NormBounds norm_bounds(const Norm& phi, int samples = 2000, std::uint64_t seed = 1);

}  // namespace aniso
