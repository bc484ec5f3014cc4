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

#include <bit>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "aniso/simd/kernels.hpp"
#include "doctest.h"

using namespace aniso;
using namespace aniso::simd;

namespace {

bool have_avx2() { return detected_level() == Level::kAvx2; }

std::vector<Metric> sample_metrics() {
  Mat q(3, 3);
  q << 2, 0.3, 0, 0.3, 1, 0.2, 0, 0.2, 0.5;
  Mat q2(2, 2);
  q2 << 1, 0.4, 0.4, 3;
  std::vector<Metric> out;
  for (const Norm& phi : {Norm::euclidean(3), Norm::ellipse(q), Norm::l1(3), Norm::linf(3),
                          Norm::euclidean(2), Norm::ellipse(q2), Norm::l1(2), Norm::linf(2),
                          Norm::smoothed_max(3, 0.2)}) {
    out.push_back(make_metric(DualNorm(phi), true));
  }
  return out;
}

}  // namespace

TEST_CASE("metric matches the dual norm") {
  Mat q(3, 3);
  q << 2, 0.3, 0, 0.3, 1, 0.2, 0, 0.2, 0.5;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (const Norm& phi : {Norm::euclidean(3), Norm::ellipse(q), Norm::l1(3), Norm::linf(3),
                          Norm::lp(3, 3.0)}) {
    DualNorm dual(phi);
    Metric m = make_metric(dual, false);
    for (int k = 0; k < 50; ++k) {
      Vec u = make_vec({g(rng), g(rng), g(rng)});
      CHECK(std::abs(m.eval(u[0], u[1], u[2]) - dual.eval(u)) < 1e-9 * dual.eval(u));
    }
  }
  DualNorm sm(Norm::smoothed_max(3, 0.2));
  Metric t = make_metric(sm, true);
  CHECK(t.kind == Metric::Kind::kTable);
  for (int k = 0; k < 50; ++k) {
    Vec u = make_vec({g(rng), g(rng), g(rng)});
    CHECK(std::abs(t.eval(u[0], u[1], u[2]) - sm.eval(u)) < 1e-4 * sm.eval(u));
  }
}

TEST_CASE("metric_row avx2 matches scalar") {
  if (!have_avx2()) return;
  for (const Metric& m : sample_metrics()) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 130u}) {
      std::vector<double> a(n), b(n);
      scalar::metric_row(m, -1.3, 0.07, 0.4, -0.2, n, a.data());
      avx2::metric_row(m, -1.3, 0.07, 0.4, -0.2, n, b.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12 * (1 + a[i]));
    }
  }
}

TEST_CASE("threshold_ge avx2 matches scalar") {
  if (!have_avx2()) return;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (std::size_t n : {1u, 7u, 8u, 63u, 64u, 65u, 200u, 1000u}) {
    std::vector<float> v(n);
    for (float& x : v) x = u(rng);
    v[0] = 0.5f;
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> a(words, ~0ull), b(words, ~0ull);
    scalar::threshold_ge(v.data(), n, 0.5f, a.data());
    avx2::threshold_ge(v.data(), n, 0.5f, b.data());
    CHECK(a == b);
    CHECK((a[0] & 1u) == 1u);
    if (n % 64) CHECK((a.back() >> (n % 64)) == 0u);
  }
}

TEST_CASE("popcount avx2 matches scalar") {
  std::mt19937_64 rng(9);
  for (std::size_t n : {0u, 1u, 3u, 4u, 9u, 64u, 1001u}) {
    std::vector<std::uint64_t> a(n), b(n);
    for (auto& w : a) w = rng();
    for (auto& w : b) w = rng();
    std::uint64_t pc = 0, xc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      pc += std::popcount(a[i]);
      xc += std::popcount(a[i] ^ b[i]);
    }
    CHECK(scalar::popcount(a.data(), n) == pc);
    CHECK(scalar::xor_popcount(a.data(), b.data(), n) == xc);
    if (have_avx2()) {
      CHECK(avx2::popcount(a.data(), n) == pc);
      CHECK(avx2::xor_popcount(a.data(), b.data(), n) == xc);
    }
  }
}

TEST_CASE("mark_le sets only qualifying bits") {
  std::vector<double> v = {0.1, 0.9, 0.5, 0.2};
  std::vector<std::uint64_t> bits(2, 0);
  mark_le(v.data(), v.size(), 0.5, bits.data(), 62);
  CHECK(bits[0] == (1ull << 62));
  CHECK(bits[1] == 0b11ull);
}

TEST_CASE("dispatch level") {
  const Level saved = active_level();
  set_active_level(Level::kScalar);
  CHECK(active_level() == Level::kScalar);
  if (have_avx2()) {
    set_active_level(Level::kAvx2);
    CHECK(active_level() == Level::kAvx2);
  } else {
    CHECK_THROWS_AS(set_active_level(Level::kAvx2), Error);
  }
  set_active_level(saved);
  CHECK(std::string(to_string(Level::kAvx2)) == "avx2");
}
