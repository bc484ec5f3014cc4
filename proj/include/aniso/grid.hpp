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

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "aniso/dual_norm.hpp"
#include "aniso/mesh.hpp"
#include "aniso/wulff.hpp"

namespace aniso {

// Regular grid; voxel (i, j, k) has center origin + h * (i, j, k). In 2D
// dims[2] == 1 and the third coordinate is ignored.
struct GridSpec {
  int dim = 3;
  std::array<int, 3> dims = {0, 0, 1};
  Vec origin;
  double spacing = 0.0;

  std::size_t size() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) * (j + static_cast<std::size_t>(dims[1]) * k);
  }
  std::array<int, 3> coords(std::size_t idx) const;
  Vec center(std::size_t idx) const;
  Vec center(int i, int j, int k) const;
  double cell_volume() const;
  bool same_grid(const GridSpec& other) const;
};

// Grid covering [lo, hi] with `margin` extra voxels on every side. Voxel
// centers sit at half-integer offsets from the box midpoint.
GridSpec grid_for_box(const Vec& lo, const Vec& hi, double h, int margin = 2);

// Occupancy bits over a GridSpec (true = inside).
class VoxelSet {
 public:
  VoxelSet() = default;
  explicit VoxelSet(GridSpec grid);

  const GridSpec& grid() const { return grid_; }
  int dim() const { return grid_.dim; }
  std::size_t size() const { return grid_.size(); }

  bool get(std::size_t idx) const { return (words_[idx >> 6] >> (idx & 63)) & 1u; }
  void set(std::size_t idx, bool value) {
    const std::uint64_t bit = std::uint64_t{1} << (idx & 63);
    if (value) {
      words_[idx >> 6] |= bit;
    } else {
      words_[idx >> 6] &= ~bit;
    }
  }
  bool get(int i, int j, int k) const { return get(grid_.index(i, j, k)); }

  std::uint64_t count() const;
  bool empty() const { return count() == 0; }
  // Throws margin error unless the outermost voxel layer is empty.
  void check_margin() const;
  bool touches_boundary() const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

 private:
  GridSpec grid_;
  std::vector<std::uint64_t> words_;
};

double volume(const VoxelSet& s);
VoxelSet set_union(const VoxelSet& a, const VoxelSet& b);
VoxelSet set_intersection(const VoxelSet& a, const VoxelSet& b);
VoxelSet set_difference(const VoxelSet& a, const VoxelSet& b);
// Number of voxels in exactly one of a, b.
std::uint64_t symmetric_difference_count(const VoxelSet& a, const VoxelSet& b);
double symmetric_difference_volume(const VoxelSet& a, const VoxelSet& b);

// Boolean combination of shapes, evaluated at voxel centers.
class SetExpr {
 public:
  using Predicate = std::function<bool(const Vec&)>;

  static SetExpr predicate(int dim, Predicate inside, Vec lo, Vec hi);
  static SetExpr wulff(const WulffShape& w, Vec center = {});
  static SetExpr polytope(const Polytope& p, Vec center = {});
  static SetExpr surface(const TriSurface& s);

  SetExpr operator|(const SetExpr& other) const;
  SetExpr operator&(const SetExpr& other) const;
  SetExpr operator-(const SetExpr& other) const;
  SetExpr translated(const Vec& offset) const;

  int dim() const;
  bool contains(const Vec& x) const;
  // Bounding box of the set (not of the complement of a difference).
  Vec lower() const;
  Vec upper() const;

  struct Node;

 private:
  explicit SetExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
  friend VoxelSet rasterize(const SetExpr& expr, const GridSpec& grid);
};

// Margin error when the set reaches the outermost voxel layer.
VoxelSet rasterize(const SetExpr& expr, const GridSpec& grid);
VoxelSet rasterize(const SetExpr& expr, double h, int margin = 2);

enum class DistanceMethod {
  // Shortest paths over the k-ring stencil with edge weight phi°(edge).
  kChamfer,
  // Each voxel inherits the nearest seed voxel of a neighbour and stores
  // phi°(x - seed), an upper bound that equals the exact distance to the
  // seed set away from rare propagation ties.
  kSeedPropagation,
};

struct DistanceOptions {
  DistanceMethod method = DistanceMethod::kSeedPropagation;
  int stencil_order = 1;
};

// Values of delta(x) = min{phi°(x - a) : a a seed voxel center}. Seeds are
// the complement of Omega (distance_transform) or the set itself (dilate).
struct DistanceField {
  GridSpec grid;
  std::vector<float> values;
  int stencil_order = 1;
  DistanceMethod method = DistanceMethod::kSeedPropagation;
  // Measured worst relative overestimate of a point-source run on this
  // stencil; 0 for seed propagation, which is exact for a single seed.
  double chamfer_factor = 0.0;
  // Nearest seed per voxel (seed propagation only).
  std::vector<std::int32_t> seeds;

  float at(std::size_t idx) const { return values[idx]; }
  // Multilinear interpolation; 0 outside the grid.
  double sample(const Vec& x) const;
  double max_value() const;
};

// delta^phi_Omega: phi°-distance from the complement of s. Needs the margin;
// an empty complement is an all-infinite error.
DistanceField distance_transform(const VoxelSet& s, const DualNorm& dual,
                                 const DistanceOptions& options = {});
// Distance to the voxel set itself (0 on it).
DistanceField distance_to_set(const VoxelSet& s, const DualNorm& dual,
                              const DistanceOptions& options = {});

// Chamfer factor of the k-ring stencil for phi°, measured from a point source.
double chamfer_factor(const DualNorm& dual, int dim, int stencil_order);
// Primitive integer offsets with max-norm <= k.
std::vector<std::array<int, 3>> stencil_offsets(int dim, int k);

// E_{>= r} = {delta >= r}; r = 0 keeps Omega.
VoxelSet erode(const DistanceField& df, double r);
// s + W_t: {x : distance to s <= t}. Margin error if it reaches the grid edge.
VoxelSet dilate(const VoxelSet& s, const DualNorm& dual, double t,
                const DistanceOptions& options = {});

struct Components {
  int count = 0;
  std::vector<std::int32_t> labels;  // 0 background, 1..count
  std::vector<std::uint64_t> sizes;  // index label - 1
  std::vector<Vec> barycenters;
};

// Face-connected labeling; labels follow scanline order of first voxels.
Components components(const VoxelSet& s);

struct ReachResult {
  double tau = 0.0;
  bool converged = true;
};

// Largest s with |delta(a + s eta) - s| <= h, by bisection to h / 4.
ReachResult reach_along(const DistanceField& df, const Vec& a, const Vec& eta,
                        const DualNorm& dual);

// Voxels whose distance is realized, within `slack`, by two seeds at least
// separation * delta(x) apart.
VoxelSet cut_locus(const DistanceField& df, const DualNorm& dual, double slack,
                   double separation = 1.0);

void write_voxels(std::ostream& out, const VoxelSet& s);
void write_voxels(const std::string& path, const VoxelSet& s);
VoxelSet read_voxels(std::istream& in);
VoxelSet read_voxels(const std::string& path);
void write_distance(std::ostream& out, const DistanceField& df);
void write_distance(const std::string& path, const DistanceField& df);
DistanceField read_distance(std::istream& in);
DistanceField read_distance(const std::string& path);

}  // namespace aniso
