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

#include <cstddef>
#include <cstdint>
#include <memory>

#include "aniso/dual_norm.hpp"
#include "aniso/support_table.hpp"

namespace aniso::simd {

enum class Level { kScalar, kAvx2 };

// Highest level the CPU supports, lowered to scalar by ANISO_SIMD=scalar.
Level detected_level();
Level active_level();
// Overrides the active level; requesting an unsupported level is an error.
void set_active_level(Level level);
const char* to_string(Level level);

// phi° in a form cheap enough for per-voxel inner loops.
struct Metric {
  enum class Kind { kEuclidean, kQuadratic, kL1, kLinf, kTable, kGeneric };
  Kind kind = Kind::kEuclidean;
  int dim = 3;
  double q[9] = {};  // row-major phi°(u)^2 = u^T q u for kQuadratic
  std::shared_ptr<const SupportTable> table;
  std::shared_ptr<const DualNorm> generic;

  double eval(double x, double y, double z) const;
};

// Exact kinds where phi° has a closed form cheap to vectorize; otherwise
// kTable when `allow_table` (smoothmax, custom, sampled), else kGeneric.
Metric make_metric(const DualNorm& dual, bool allow_table, int table_nodes = 257);

// out[i] = phi°(x0 + i * dx, y, z).
void metric_row(const Metric& m, double x0, double dx, double y, double z,
                std::size_t n, double* out);
// Sets bit i of `bits` (LSB-first words, starting at bit `offset`) iff
// values[i] <= bound; other bits are left untouched.
void mark_le(const double* values, std::size_t n, double bound,
             std::uint64_t* bits, std::size_t offset);
// bits[i] = values[i] >= t for i < n; trailing bits of the last word cleared.
void threshold_ge(const float* values, std::size_t n, float t, std::uint64_t* bits);
std::uint64_t popcount(const std::uint64_t* words, std::size_t n);
std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);

namespace scalar {
void metric_row(const Metric& m, double x0, double dx, double y, double z,
                std::size_t n, double* out);
void threshold_ge(const float* values, std::size_t n, float t, std::uint64_t* bits);
std::uint64_t popcount(const std::uint64_t* words, std::size_t n);
std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
void metric_row(const Metric& m, double x0, double dx, double y, double z,
                std::size_t n, double* out);
void threshold_ge(const float* values, std::size_t n, float t, std::uint64_t* bits);
std::uint64_t popcount(const std::uint64_t* words, std::size_t n);
std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
}  // namespace avx2

}  // namespace aniso::simd
