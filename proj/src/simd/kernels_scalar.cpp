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
#include <bit>
#include <cmath>

#include "aniso/simd/kernels.hpp"

namespace aniso::simd {

double Metric::eval(double x, double y, double z) const {
  switch (kind) {
    case Kind::kEuclidean:
      return std::sqrt(x * x + y * y + z * z);
    case Kind::kQuadratic: {
      if (dim == 2) {
        return std::sqrt(std::max(0.0, q[0] * x * x + 2 * q[1] * x * y + q[3] * y * y));
      }
      const double a = q[0] * x + q[1] * y + q[2] * z;
      const double b = q[3] * x + q[4] * y + q[5] * z;
      const double c = q[6] * x + q[7] * y + q[8] * z;
      return std::sqrt(std::max(0.0, x * a + y * b + z * c));
    }
    case Kind::kL1:
      return std::abs(x) + std::abs(y) + std::abs(z);
    case Kind::kLinf:
      return std::max({std::abs(x), std::abs(y), std::abs(z)});
    case Kind::kTable:
      return table->eval(x, y, z);
    case Kind::kGeneric:
      return dim == 2 ? generic->eval(make_vec({x, y})) : generic->eval(make_vec({x, y, z}));
  }
  return 0.0;
}

namespace scalar {

void metric_row(const Metric& m, double x0, double dx, double y, double z,
                std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = m.eval(x0 + static_cast<double>(i) * dx, y, z);
}

void threshold_ge(const float* values, std::size_t n, float t, std::uint64_t* bits) {
  const std::size_t words = (n + 63) / 64;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t word = 0;
    const std::size_t end = std::min<std::size_t>(64, n - w * 64);
    for (std::size_t b = 0; b < end; ++b) {
      word |= static_cast<std::uint64_t>(values[w * 64 + b] >= t) << b;
    }
    bits[w] = word;
  }
}

std::uint64_t popcount(const std::uint64_t* words, std::size_t n) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += std::popcount(words[i]);
  return c;
}

std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += std::popcount(a[i] ^ b[i]);
  return c;
}

}  // namespace scalar

}  // namespace aniso::simd
