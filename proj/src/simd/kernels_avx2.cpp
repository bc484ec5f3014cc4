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

#include <immintrin.h>

#include <algorithm>

#include "aniso/simd/kernels.hpp"

namespace aniso::simd::avx2 {

namespace {

__m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

// Nibble-table popcount of four 64-bit lanes.
__m256i popcount_epi64(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  __m256i lo = _mm256_and_si256(v, low);
  __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  __m256i bytes = _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo), _mm256_shuffle_epi8(lut, hi));
  return _mm256_sad_epu8(bytes, _mm256_setzero_si256());
}

std::uint64_t hsum_epi64(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

void metric_row(const Metric& m, double x0, double dx, double y, double z,
                std::size_t n, double* out) {
  using Kind = Metric::Kind;
  if (m.kind == Kind::kTable || m.kind == Kind::kGeneric) {
    scalar::metric_row(m, x0, dx, y, z, n, out);
    return;
  }
  const __m256d step = _mm256_set1_pd(4.0 * dx);
  __m256d x = _mm256_add_pd(_mm256_set1_pd(x0),
                            _mm256_mul_pd(_mm256_set1_pd(dx), _mm256_setr_pd(0, 1, 2, 3)));
  const __m256d vy = _mm256_set1_pd(y), vz = _mm256_set1_pd(z);
  std::size_t i = 0;
  switch (m.kind) {
    case Kind::kEuclidean: {
      const __m256d yz = _mm256_set1_pd(y * y + z * z);
      for (; i + 4 <= n; i += 4, x = _mm256_add_pd(x, step)) {
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_fmadd_pd(x, x, yz)));
      }
      break;
    }
    case Kind::kQuadratic: {
      // u^T q u = q00 x^2 + 2 x (q01 y + q02 z) + (q11 y^2 + 2 q12 y z + q22 z^2).
      const double* q = m.q;
      double lin, cst;
      if (m.dim == 2) {
        lin = 2.0 * q[1] * y;
        cst = q[3] * y * y;
      } else {
        lin = 2.0 * (q[1] * y + q[2] * z);
        cst = q[4] * y * y + 2.0 * q[5] * y * z + q[8] * z * z;
      }
      const __m256d a = _mm256_set1_pd(q[0]), b = _mm256_set1_pd(lin), c = _mm256_set1_pd(cst);
      const __m256d zero = _mm256_setzero_pd();
      for (; i + 4 <= n; i += 4, x = _mm256_add_pd(x, step)) {
        __m256d s = _mm256_fmadd_pd(_mm256_fmadd_pd(a, x, b), x, c);
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_max_pd(s, zero)));
      }
      break;
    }
    case Kind::kL1: {
      const __m256d yz = _mm256_add_pd(abs_pd(vy), abs_pd(vz));
      for (; i + 4 <= n; i += 4, x = _mm256_add_pd(x, step)) {
        _mm256_storeu_pd(out + i, _mm256_add_pd(abs_pd(x), yz));
      }
      break;
    }
    case Kind::kLinf: {
      const __m256d yz = _mm256_max_pd(abs_pd(vy), abs_pd(vz));
      for (; i + 4 <= n; i += 4, x = _mm256_add_pd(x, step)) {
        _mm256_storeu_pd(out + i, _mm256_max_pd(abs_pd(x), yz));
      }
      break;
    }
    default:
      break;
  }
  for (; i < n; ++i) out[i] = m.eval(x0 + static_cast<double>(i) * dx, y, z);
}

void threshold_ge(const float* values, std::size_t n, float t, std::uint64_t* bits) {
  const __m256 vt = _mm256_set1_ps(t);
  const std::size_t full = n / 64;
  for (std::size_t w = 0; w < full; ++w) {
    std::uint64_t word = 0;
    for (int b = 0; b < 8; ++b) {
      __m256 v = _mm256_loadu_ps(values + w * 64 + b * 8);
      const auto mask = static_cast<unsigned>(_mm256_movemask_ps(_mm256_cmp_ps(v, vt, _CMP_GE_OQ)));
      word |= static_cast<std::uint64_t>(mask) << (8 * b);
    }
    bits[w] = word;
  }
  if (full * 64 < n) scalar::threshold_ge(values + full * 64, n - full * 64, t, bits + full);
}

std::uint64_t popcount(const std::uint64_t* words, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + i));
    acc = _mm256_add_epi64(acc, popcount_epi64(v));
  }
  return hsum_epi64(acc) + scalar::popcount(words + i, n - i);
}

std::uint64_t xor_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_xor_si256(va, vb)));
  }
  return hsum_epi64(acc) + scalar::xor_popcount(a + i, b + i, n - i);
}

}  // namespace aniso::simd::avx2
