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

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "aniso/simd/kernels.hpp"

namespace aniso::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<int>& active_slot() {
  static std::atomic<int> slot(static_cast<int>(detected_level()));
  return slot;
}

// Tables cost one dual solve per node, so they are shared between metrics of
// norms with the same spec. Custom and sampled norms do not have unique specs.
std::shared_ptr<const SupportTable> cached_table(const DualNorm& dual, bool closed, int nodes) {
  auto build = [&] {
    DualNorm copy = dual;
    return std::make_shared<const SupportTable>(dual.dim(), nodes,
                                                [copy](const Vec& v) { return copy.eval(v); });
  };
  const NormFamily f = dual.base().family();
  if (!closed || f == NormFamily::kCustom || f == NormFamily::kSampled) return build();
  static std::mutex mu;
  static std::map<std::tuple<std::string, int, int>, std::shared_ptr<const SupportTable>> cache;
  const auto key = std::make_tuple(dual.base().spec(), dual.dim(), nodes);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (!slot) slot = build();
  return slot;
}

}  // namespace

Level detected_level() {
  static const Level level = [] {
    const char* env = std::getenv("ANISO_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return Level::kScalar;
    return cpu_has_avx2() ? Level::kAvx2 : Level::kScalar;
  }();
  return level;
}

Level active_level() { return static_cast<Level>(active_slot().load(std::memory_order_relaxed)); }

void set_active_level(Level level) {
  if (level == Level::kAvx2 && !cpu_has_avx2()) {
    throw Error(ErrorCode::kUnsupportedOperation, "AVX2 is not available on this CPU");
  }
  active_slot().store(static_cast<int>(level), std::memory_order_relaxed);
}

const char* to_string(Level level) { return level == Level::kAvx2 ? "avx2" : "scalar"; }

Metric make_metric(const DualNorm& dual, bool allow_table, int table_nodes) {
  const Norm& base = dual.base();
  Metric m;
  m.dim = base.dim();
  const bool closed = dual.options().method == DualMethod::kAutomatic;
  switch (closed ? base.family() : NormFamily::kCustom) {
    case NormFamily::kEuclidean:
      m.kind = Metric::Kind::kEuclidean;
      return m;
    case NormFamily::kEllipse: {
      m.kind = Metric::Kind::kQuadratic;
      Mat inv = base.matrix().inverse();
      for (int i = 0; i < m.dim; ++i) {
        for (int j = 0; j < m.dim; ++j) m.q[i * m.dim + j] = inv(i, j);
      }
      return m;
    }
    case NormFamily::kL1:
      m.kind = Metric::Kind::kLinf;
      return m;
    case NormFamily::kLinf:
      m.kind = Metric::Kind::kL1;
      return m;
    case NormFamily::kWeightedLp:
      break;
    default:
      if (allow_table) {
        m.kind = Metric::Kind::kTable;
        m.table = cached_table(dual, closed, table_nodes);
        return m;
      }
      break;
  }
  m.kind = Metric::Kind::kGeneric;
  m.generic = std::make_shared<DualNorm>(dual);
  return m;
}

void metric_row(const Metric& m, double x0, double dx, double y, double z,
                std::size_t n, double* out) {
  if (active_level() == Level::kAvx2) {
    avx2::metric_row(m, x0, dx, y, z, n, out);
  } else {
    scalar::metric_row(m, x0, dx, y, z, n, out);
  }
}

void mark_le(const double* values, std::size_t n, double bound, std::uint64_t* bits,
             std::size_t offset) {
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] <= bound) {
      const std::size_t b = offset + i;
      bits[b >> 6] |= std::uint64_t{1} << (b & 63);
    }
  }
}

void threshold_ge(const float* values, std::size_t n, float t, std::uint64_t* bits) {
  if (active_level() == Level::kAvx2) {
    avx2::threshold_ge(values, n, t, bits);
  } else {
    scalar::threshold_ge(values, n, t, bits);
  }
}

std::uint64_t popcount(const std::uint64_t* words, std::size_t n) {
  return active_level() == Level::kAvx2 ? avx2::popcount(words, n) : scalar::popcount(words, n);
}

std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  return active_level() == Level::kAvx2 ? avx2::xor_popcount(a, b, n)
                                        : scalar::xor_popcount(a, b, n);
}

}  // namespace aniso::simd
