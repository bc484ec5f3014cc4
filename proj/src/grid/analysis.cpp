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
#include <deque>

#include "aniso/grid.hpp"
#include "aniso/simd/kernels.hpp"

namespace aniso {

Components components(const VoxelSet& s) {
  const GridSpec& g = s.grid();
  Components out;
  out.labels.assign(g.size(), 0);
  const int dim = g.dim;
  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < g.size(); ++start) {
    if (!s.get(start) || out.labels[start] != 0) continue;
    const std::int32_t label = ++out.count;
    out.labels[start] = label;
    queue.push_back(start);
    std::uint64_t size = 0;
    Vec sum = Vec::Zero(dim);
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      ++size;
      sum += g.center(i);
      const auto c = g.coords(i);
      for (int a = 0; a < dim; ++a) {
        for (int sign : {-1, 1}) {
          auto n = c;
          n[a] += sign;
          if (n[a] < 0 || n[a] >= g.dims[a]) continue;
          const std::size_t j = g.index(n[0], n[1], n[2]);
          if (s.get(j) && out.labels[j] == 0) {
            out.labels[j] = label;
            queue.push_back(j);
          }
        }
      }
    }
    out.sizes.push_back(size);
    out.barycenters.push_back(sum / static_cast<double>(size));
  }
  return out;
}

ReachResult reach_along(const DistanceField& df, const Vec& a, const Vec& eta,
                        const DualNorm& dual) {
  const GridSpec& g = df.grid;
  if (a.size() != g.dim || eta.size() != g.dim) {
    throw Error(ErrorCode::kInvalidArgument, "reach point dimension mismatch");
  }
  if (std::abs(dual.eval(eta) - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, "reach direction must lie on the Wulff boundary");
  }
  for (int i = 0; i < g.dim; ++i) {
    const double u = (a[i] - g.origin[i]) / g.spacing;
    if (!(u >= 0 && u <= g.dims[i] - 1)) throw Error(ErrorCode::kInvalidArgument, "reach point outside grid");
  }
  const double h = g.spacing;
  auto holds = [&](double s) { return df.sample(a + s * eta) - s >= -h; };
  ReachResult out;
  if (!holds(0.0)) {
    out.converged = false;
    return out;
  }
  double box = 0.0;
  for (int i = 0; i < g.dim; ++i) box += std::pow(h * g.dims[i], 2);
  const double smax = std::sqrt(box) / std::max(eta.norm(), 1e-300) + h;
  double lo = 0.0, hi = 0.0;
  while (true) {
    hi = lo + 0.5 * h;
    if (hi > smax) {
      out.tau = lo;
      out.converged = false;
      return out;
    }
    if (!holds(hi)) break;
    lo = hi;
  }
  while (hi - lo > 0.25 * h) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  out.tau = lo;
  return out;
}

VoxelSet cut_locus(const DistanceField& df, const DualNorm& dual, double slack, double separation) {
  if (df.seeds.empty()) {
    throw Error(ErrorCode::kUnsupportedOperation, "cut locus needs a seed-propagation field");
  }
  const GridSpec& g = df.grid;
  VoxelSet out(g);
  const simd::Metric m = simd::make_metric(dual, true);
  auto dist = [&](const std::array<int, 3>& p, const std::array<int, 3>& q) {
    return g.spacing * m.eval(p[0] - q[0], p[1] - q[1], p[2] - q[2]);
  };
  const int kz = g.dim == 3 ? 1 : 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = df.values[i];
    if (!(d > 0) || !std::isfinite(d)) continue;
    const auto c = g.coords(i);
    const auto sx = g.coords(static_cast<std::size_t>(df.seeds[i]));
    bool hit = false;
    for (int dz = -kz; dz <= kz && !hit; ++dz) {
      for (int dy = -1; dy <= 1 && !hit; ++dy) {
        for (int dx = -1; dx <= 1 && !hit; ++dx) {
          const int n[3] = {c[0] + dx, c[1] + dy, c[2] + dz};
          if (n[0] < 0 || n[1] < 0 || n[2] < 0 || n[0] >= g.dims[0] || n[1] >= g.dims[1] ||
              n[2] >= g.dims[2]) {
            continue;
          }
          const std::int32_t b = df.seeds[g.index(n[0], n[1], n[2])];
          if (b < 0 || b == df.seeds[i]) continue;
          const auto pb = g.coords(static_cast<std::size_t>(b));
          hit = dist(c, pb) <= d + slack && dist(pb, sx) >= separation * d;
        }
      }
    }
    if (hit) out.set(i, true);
  }
  return out;
}

}  // namespace aniso
