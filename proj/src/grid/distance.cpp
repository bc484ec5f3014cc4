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

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <queue>
#include <tuple>

#include "aniso/grid.hpp"
#include "aniso/simd/kernels.hpp"

namespace aniso {

namespace {

using QueueItem = std::pair<double, std::int32_t>;
using Queue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<QueueItem>>;

void check_order(int k) {
  if (k < 1 || k > 3) throw Error(ErrorCode::kInvalidArgument, "stencil order must be 1, 2 or 3");
}

// Full ring of offsets with max-norm <= k (seed propagation candidates).
std::vector<std::array<int, 3>> ring_offsets(int dim, int k) {
  std::vector<std::array<int, 3>> out;
  const int kz = dim == 3 ? k : 0;
  for (int c = -kz; c <= kz; ++c) {
    for (int b = -k; b <= k; ++b) {
      for (int a = -k; a <= k; ++a) {
        if (a != 0 || b != 0 || c != 0) out.push_back({a, b, c});
      }
    }
  }
  return out;
}

struct Engine {
  const GridSpec& g;
  const std::vector<std::uint8_t>& role;  // 0 target, 1 seed
  DistanceMethod method;
  int order;
  double limit = kInf;

  std::vector<double> dist;
  std::vector<std::int32_t> seed;

  void run(const DualNorm& dual) {
    const std::size_t n = g.size();
    const auto offs = method == DistanceMethod::kChamfer ? stencil_offsets(g.dim, order)
                                                          : ring_offsets(g.dim, order);
    std::vector<std::ptrdiff_t> step(offs.size());
    std::vector<double> weight(offs.size());
    for (std::size_t o = 0; o < offs.size(); ++o) {
      step[o] = offs[o][0] + static_cast<std::ptrdiff_t>(g.dims[0]) *
                                 (offs[o][1] + static_cast<std::ptrdiff_t>(g.dims[1]) * offs[o][2]);
      Vec v(g.dim);
      for (int a = 0; a < g.dim; ++a) v[a] = g.spacing * offs[o][a];
      weight[o] = dual.eval(v);
    }
    const simd::Metric metric = simd::make_metric(dual, true);
    dist.assign(n, kInf);
    if (method == DistanceMethod::kSeedPropagation) seed.assign(n, -1);

    auto inside = [&](const std::array<int, 3>& c, const std::array<int, 3>& o) {
      for (int a = 0; a < 3; ++a) {
        const int v = c[a] + o[a];
        if (v < 0 || v >= g.dims[a]) return false;
      }
      return true;
    };

    Queue queue;
    for (std::size_t i = 0; i < n; ++i) {
      if (role[i] != 1) continue;
      dist[i] = 0.0;
      if (!seed.empty()) seed[i] = static_cast<std::int32_t>(i);
      const auto c = g.coords(i);
      bool frontier = false;
      for (std::size_t o = 0; o < offs.size() && !frontier; ++o) {
        frontier = inside(c, offs[o]) && role[i + step[o]] == 0;
      }
      if (frontier) queue.emplace(0.0, static_cast<std::int32_t>(i));
    }

    while (!queue.empty()) {
      const auto [d, i] = queue.top();
      queue.pop();
      if (d > dist[i]) continue;
      if (d > limit) break;
      const auto c = g.coords(i);
      std::array<int, 3> sc{};
      if (!seed.empty()) sc = g.coords(seed[i]);
      for (std::size_t o = 0; o < offs.size(); ++o) {
        if (!inside(c, offs[o])) continue;
        const std::size_t y = i + step[o];
        if (role[y] != 0) continue;
        double cand;
        if (seed.empty()) {
          cand = d + weight[o];
        } else {
          cand = g.spacing * metric.eval(c[0] + offs[o][0] - sc[0], c[1] + offs[o][1] - sc[1],
                                         c[2] + offs[o][2] - sc[2]);
        }
        if (cand < dist[y]) {
          dist[y] = cand;
          if (!seed.empty()) seed[y] = seed[i];
          queue.emplace(cand, static_cast<std::int32_t>(y));
        }
      }
    }
  }
};

DistanceField make_field(const VoxelSet& s, const DualNorm& dual, const DistanceOptions& opt,
                         bool seeds_are_set, double limit) {
  check_order(opt.stencil_order);
  if (dual.dim() != s.dim()) throw Error(ErrorCode::kInvalidArgument, "norm and grid dimension differ");
  const GridSpec& g = s.grid();
  std::vector<std::uint8_t> role(g.size());
  std::size_t seeds = 0;
  for (std::size_t i = 0; i < role.size(); ++i) {
    role[i] = s.get(i) == seeds_are_set ? 1 : 0;
    seeds += role[i];
  }
  if (seeds == 0) throw Error(ErrorCode::kAllInfinite, "no seed voxels; distance is infinite everywhere");
  Engine e{g, role, opt.method, opt.stencil_order, limit, {}, {}};
  e.run(dual);
  DistanceField df;
  df.grid = g;
  df.stencil_order = opt.stencil_order;
  df.method = opt.method;
  df.chamfer_factor =
      opt.method == DistanceMethod::kChamfer ? chamfer_factor(dual, g.dim, opt.stencil_order) : 0.0;
  df.values.resize(e.dist.size());
  std::transform(e.dist.begin(), e.dist.end(), df.values.begin(),
                 [](double v) { return static_cast<float>(v); });
  df.seeds = std::move(e.seed);
  return df;
}

}  // namespace

std::vector<std::array<int, 3>> stencil_offsets(int dim, int k) {
  check_order(k);
  std::vector<std::array<int, 3>> out;
  for (const auto& o : ring_offsets(dim, k)) {
    if (std::gcd(std::gcd(std::abs(o[0]), std::abs(o[1])), std::abs(o[2])) == 1) out.push_back(o);
  }
  return out;
}

double chamfer_factor(const DualNorm& dual, int dim, int stencil_order) {
  check_order(stencil_order);
  static std::mutex mu;
  static std::map<std::tuple<std::string, int, int>, double> cache;
  const auto key = std::make_tuple(dual.base().spec(), dim, stencil_order);
  const bool cacheable = dual.base().family() != NormFamily::kCustom;
  if (cacheable) {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const int half = 8 * stencil_order;
  GridSpec g;
  g.dim = dim;
  g.spacing = 1.0;
  g.origin = Vec::Constant(dim, -half);
  g.dims = {2 * half + 1, 2 * half + 1, dim == 3 ? 2 * half + 1 : 1};
  std::vector<std::uint8_t> role(g.size(), 0);
  const std::size_t src = g.index(half, half, dim == 3 ? half : 0);
  role[src] = 1;
  Engine e{g, role, DistanceMethod::kChamfer, stencil_order, kInf, {}, {}};
  e.run(dual);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == src) continue;
    const Vec x = g.center(i);
    if (x.cwiseAbs().maxCoeff() > half / 2) continue;
    worst = std::max(worst, e.dist[i] / dual.eval(x) - 1.0);
  }
  std::lock_guard<std::mutex> lock(mu);
  if (cacheable) cache[key] = worst;
  return worst;
}

DistanceField distance_transform(const VoxelSet& s, const DualNorm& dual,
                                 const DistanceOptions& options) {
  if (s.count() == s.size()) throw Error(ErrorCode::kAllInfinite, "set has empty complement");
  s.check_margin();
  return make_field(s, dual, options, false, kInf);
}

DistanceField distance_to_set(const VoxelSet& s, const DualNorm& dual,
                              const DistanceOptions& options) {
  return make_field(s, dual, options, true, kInf);
}

double DistanceField::sample(const Vec& x) const {
  if (x.size() != grid.dim) throw Error(ErrorCode::kInvalidArgument, "sample dimension mismatch");
  double t[3] = {0, 0, 0};
  int base[3] = {0, 0, 0};
  for (int a = 0; a < grid.dim; ++a) {
    const double u = (x[a] - grid.origin[a]) / grid.spacing;
    base[a] = static_cast<int>(std::floor(u));
    t[a] = u - base[a];
  }
  const int corners = grid.dim == 3 ? 8 : 4;
  double acc = 0.0;
  for (int c = 0; c < corners; ++c) {
    int idx[3] = {base[0] + (c & 1), base[1] + ((c >> 1) & 1), grid.dim == 3 ? base[2] + ((c >> 2) & 1) : 0};
    double w = 1.0;
    for (int a = 0; a < grid.dim; ++a) w *= ((c >> a) & 1) ? t[a] : 1.0 - t[a];
    if (w == 0.0) continue;
    bool ok = true;
    for (int a = 0; a < 3; ++a) ok = ok && idx[a] >= 0 && idx[a] < grid.dims[a];
    if (ok) acc += w * values[grid.index(idx[0], idx[1], idx[2])];
  }
  return acc;
}

double DistanceField::max_value() const {
  double m = 0.0;
  for (float v : values) {
    if (std::isfinite(v)) m = std::max(m, static_cast<double>(v));
  }
  return m;
}

VoxelSet erode(const DistanceField& df, double r) {
  if (!(r >= 0)) throw Error(ErrorCode::kInvalidArgument, "erosion radius must be >= 0");
  VoxelSet out(df.grid);
  const float t = r == 0 ? std::numeric_limits<float>::denorm_min() : static_cast<float>(r);
  simd::threshold_ge(df.values.data(), df.values.size(), t, out.words().data());
  return out;
}

VoxelSet dilate(const VoxelSet& s, const DualNorm& dual, double t, const DistanceOptions& options) {
  if (!(t >= 0)) throw Error(ErrorCode::kInvalidArgument, "dilation radius must be >= 0");
  if (s.empty()) return s;
  // Seed propagation is not strictly monotone in pop order; run a few
  // stencil steps past t before cutting the queue.
  double reach = 0.0;
  for (const auto& o : stencil_offsets(s.dim(), options.stencil_order)) {
    Vec v(s.dim());
    for (int a = 0; a < s.dim(); ++a) v[a] = s.grid().spacing * o[a];
    reach = std::max(reach, dual.eval(v));
  }
  const DistanceField df = make_field(s, dual, options, true, t + 4 * reach);
  VoxelSet out(s.grid());
  const float above = std::nextafter(static_cast<float>(t), std::numeric_limits<float>::infinity());
  simd::threshold_ge(df.values.data(), df.values.size(), above, out.words().data());
  auto& w = out.words();
  for (auto& word : w) word = ~word;
  const std::size_t tail = s.size() % 64;
  if (tail) w.back() &= (std::uint64_t{1} << tail) - 1;
  out.check_margin();
  return out;
}

}  // namespace aniso
