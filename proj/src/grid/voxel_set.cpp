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
#include <cstring>
#include <fstream>
#include <sstream>

#include "aniso/grid.hpp"
#include "aniso/io.hpp"
#include "aniso/simd/kernels.hpp"

namespace aniso {

namespace {

constexpr std::uint32_t kEndianTag = 0x01020304u;
constexpr char kVoxMagic[8] = {'A', 'N', 'I', 'S', 'O', 'V', 'O', 'X'};
constexpr char kDistMagic[8] = {'A', 'N', 'I', 'S', 'O', 'D', 'F', '\0'};

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T take(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorCode::kIo, "truncated grid file");
  return v;
}

void put_grid(std::ostream& out, const char* magic, const GridSpec& g) {
  out.write(magic, 8);
  put(out, kEndianTag);
  put(out, static_cast<std::int32_t>(g.dim));
  for (int d : g.dims) put(out, static_cast<std::int32_t>(d));
  for (int i = 0; i < 3; ++i) put(out, i < g.dim ? g.origin[i] : 0.0);
  put(out, g.spacing);
}

GridSpec take_grid(std::istream& in, const char* magic) {
  char m[8];
  in.read(m, 8);
  if (!in || std::memcmp(m, magic, 8) != 0) throw Error(ErrorCode::kIo, "bad grid file magic");
  if (take<std::uint32_t>(in) != kEndianTag) {
    throw Error(ErrorCode::kIo, "grid file has foreign byte order");
  }
  GridSpec g;
  g.dim = take<std::int32_t>(in);
  if (g.dim != 2 && g.dim != 3) throw Error(ErrorCode::kIo, "bad grid dimension");
  for (int& d : g.dims) d = take<std::int32_t>(in);
  double o[3];
  for (double& v : o) v = take<double>(in);
  g.origin = Vec(g.dim);
  for (int i = 0; i < g.dim; ++i) g.origin[i] = o[i];
  g.spacing = take<double>(in);
  if (g.dims[0] <= 0 || g.dims[1] <= 0 || g.dims[2] <= 0 || (g.dim == 2 && g.dims[2] != 1) ||
      !(g.spacing > 0)) {
    throw Error(ErrorCode::kIo, "bad grid header");
  }
  return g;
}

void check_same(const VoxelSet& a, const VoxelSet& b) {
  if (!a.grid().same_grid(b.grid())) {
    throw Error(ErrorCode::kInvalidArgument, "voxel sets live on different grids");
  }
}

template <class F>
VoxelSet combine_words(const VoxelSet& a, const VoxelSet& b, F f) {
  check_same(a, b);
  VoxelSet out(a.grid());
  auto& w = out.words();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = f(a.words()[i], b.words()[i]);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::array<int, 3> GridSpec::coords(std::size_t idx) const {
  const int i = static_cast<int>(idx % dims[0]);
  idx /= dims[0];
  const int j = static_cast<int>(idx % dims[1]);
  return {i, j, static_cast<int>(idx / dims[1])};
}

Vec GridSpec::center(int i, int j, int k) const {
  Vec x = origin;
  x[0] += spacing * i;
  x[1] += spacing * j;
  if (dim == 3) x[2] += spacing * k;
  return x;
}

Vec GridSpec::center(std::size_t idx) const {
  const auto c = coords(idx);
  return center(c[0], c[1], c[2]);
}

double GridSpec::cell_volume() const { return std::pow(spacing, dim); }

bool GridSpec::same_grid(const GridSpec& other) const {
  if (dim != other.dim || dims != other.dims || spacing != other.spacing) return false;
  for (int i = 0; i < dim; ++i) {
    if (origin[i] != other.origin[i]) return false;
  }
  return true;
}

GridSpec grid_for_box(const Vec& lo, const Vec& hi, double h, int margin) {
  if (!(h > 0) || lo.size() != hi.size() || (lo.size() != 2 && lo.size() != 3) || margin < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad grid box");
  }
  GridSpec g;
  g.dim = static_cast<int>(lo.size());
  g.spacing = h;
  g.origin = Vec(g.dim);
  g.dims = {1, 1, 1};
  for (int i = 0; i < g.dim; ++i) {
    if (!(hi[i] >= lo[i])) throw Error(ErrorCode::kInvalidArgument, "empty grid box");
    const double mid = 0.5 * (lo[i] + hi[i]);
    const int half = static_cast<int>(std::ceil(0.5 * (hi[i] - lo[i]) / h - 1e-9)) + margin;
    g.origin[i] = mid - (half - 0.5) * h;
    g.dims[i] = 2 * half;
  }
  const double n = static_cast<double>(g.dims[0]) * g.dims[1] * g.dims[2];
  if (n > 2.0e9) throw Error(ErrorCode::kInvalidArgument, "grid too large");
  return g;
}

VoxelSet::VoxelSet(GridSpec grid) : grid_(std::move(grid)), words_((grid_.size() + 63) / 64, 0) {}

std::uint64_t VoxelSet::count() const { return simd::popcount(words_.data(), words_.size()); }

bool VoxelSet::touches_boundary() const {
  const auto& d = grid_.dims;
  for (int k = 0; k < d[2]; ++k) {
    for (int j = 0; j < d[1]; ++j) {
      const bool face = j == 0 || j == d[1] - 1 ||
                        (grid_.dim == 3 && (k == 0 || k == d[2] - 1));
      if (face) {
        for (int i = 0; i < d[0]; ++i) {
          if (get(i, j, k)) return true;
        }
      } else if (get(0, j, k) || get(d[0] - 1, j, k)) {
        return true;
      }
    }
  }
  return false;
}

void VoxelSet::check_margin() const {
  if (touches_boundary()) throw Error(ErrorCode::kMargin, "set touches the grid boundary");
}

double volume(const VoxelSet& s) {
  return static_cast<double>(s.count()) * s.grid().cell_volume();
}

VoxelSet set_union(const VoxelSet& a, const VoxelSet& b) {
  return combine_words(a, b, [](std::uint64_t x, std::uint64_t y) { return x | y; });
}

VoxelSet set_intersection(const VoxelSet& a, const VoxelSet& b) {
  return combine_words(a, b, [](std::uint64_t x, std::uint64_t y) { return x & y; });
}

VoxelSet set_difference(const VoxelSet& a, const VoxelSet& b) {
  return combine_words(a, b, [](std::uint64_t x, std::uint64_t y) { return x & ~y; });
}

std::uint64_t symmetric_difference_count(const VoxelSet& a, const VoxelSet& b) {
  check_same(a, b);
  return simd::xor_popcount(a.words().data(), b.words().data(), a.words().size());
}

double symmetric_difference_volume(const VoxelSet& a, const VoxelSet& b) {
  return static_cast<double>(symmetric_difference_count(a, b)) * a.grid().cell_volume();
}

void write_voxels(std::ostream& out, const VoxelSet& s) {
  put_grid(out, kVoxMagic, s.grid());
  put(out, static_cast<std::uint64_t>(s.words().size()));
  out.write(reinterpret_cast<const char*>(s.words().data()),
            static_cast<std::streamsize>(s.words().size() * sizeof(std::uint64_t)));
  if (!out) throw Error(ErrorCode::kIo, "voxel write failed");
}

void write_voxels(const std::string& path, const VoxelSet& s) {
  write_file_atomic(path, [&](std::ostream& out) { write_voxels(out, s); }, true);
}

VoxelSet read_voxels(std::istream& in) {
  VoxelSet s(take_grid(in, kVoxMagic));
  if (take<std::uint64_t>(in) != s.words().size()) {
    throw Error(ErrorCode::kIo, "voxel payload size mismatch");
  }
  in.read(reinterpret_cast<char*>(s.words().data()),
          static_cast<std::streamsize>(s.words().size() * sizeof(std::uint64_t)));
  if (!in) throw Error(ErrorCode::kIo, "truncated voxel payload");
  return s;
}

VoxelSet read_voxels(const std::string& path) {
  std::istringstream ss(slurp(path));
  return read_voxels(ss);
}

void write_distance(std::ostream& out, const DistanceField& df) {
  put_grid(out, kDistMagic, df.grid);
  put(out, static_cast<std::int32_t>(df.stencil_order));
  put(out, static_cast<std::int32_t>(df.method));
  put(out, df.chamfer_factor);
  put(out, static_cast<std::uint64_t>(df.values.size()));
  out.write(reinterpret_cast<const char*>(df.values.data()),
            static_cast<std::streamsize>(df.values.size() * sizeof(float)));
  put(out, static_cast<std::uint64_t>(df.seeds.size()));
  out.write(reinterpret_cast<const char*>(df.seeds.data()),
            static_cast<std::streamsize>(df.seeds.size() * sizeof(std::int32_t)));
  if (!out) throw Error(ErrorCode::kIo, "distance write failed");
}

void write_distance(const std::string& path, const DistanceField& df) {
  write_file_atomic(path, [&](std::ostream& out) { write_distance(out, df); }, true);
}

DistanceField read_distance(std::istream& in) {
  DistanceField df;
  df.grid = take_grid(in, kDistMagic);
  df.stencil_order = take<std::int32_t>(in);
  const auto method = take<std::int32_t>(in);
  if (method != 0 && method != 1) throw Error(ErrorCode::kIo, "bad distance method tag");
  df.method = static_cast<DistanceMethod>(method);
  df.chamfer_factor = take<double>(in);
  const auto n = take<std::uint64_t>(in);
  if (n != df.grid.size()) throw Error(ErrorCode::kIo, "distance payload size mismatch");
  df.values.resize(n);
  in.read(reinterpret_cast<char*>(df.values.data()), static_cast<std::streamsize>(n * sizeof(float)));
  const auto ns = take<std::uint64_t>(in);
  if (ns != 0 && ns != n) throw Error(ErrorCode::kIo, "seed payload size mismatch");
  df.seeds.resize(ns);
  in.read(reinterpret_cast<char*>(df.seeds.data()),
          static_cast<std::streamsize>(ns * sizeof(std::int32_t)));
  if (!in) throw Error(ErrorCode::kIo, "truncated distance payload");
  return df;
}

DistanceField read_distance(const std::string& path) {
  std::istringstream ss(slurp(path));
  return read_distance(ss);
}

}  // namespace aniso
