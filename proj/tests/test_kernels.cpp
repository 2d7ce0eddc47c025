// Copyright 2026 The qttsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qtt/kernels.hpp"

using namespace qtt;
namespace k = qtt::kernels;

namespace {

std::vector<cplx> random_buf(size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> v(n);
  for (auto& x : v) x = rng.cnorm();
  return v;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("gemm_acc scalar reference against a hand contraction") {
  // 2x2 times 2x2 with known entries
  std::vector<cplx> a{{1, 1}, {2, 0}, {0, -1}, {1, 0}};
  std::vector<cplx> b{{1, 0}, {0, 1}, {3, 0}, {1, -1}};
  std::vector<cplx> c(4, cplx(0));
  k::detail::gemm_acc_scalar(a.data(), b.data(), c.data(), 2, 2, 2);
  CHECK(std::abs(c[0] - cplx(7, 1)) < 1e-15);       // (1+i)*1 + 2*3
  CHECK(std::abs(c[1] - cplx(1, -1)) < 1e-15);      // (1+i)*i + 2*(1-i)
  CHECK(std::abs(c[2] - cplx(3, -1)) < 1e-15);      // -i*1 + 1*3
  CHECK(std::abs(c[3] - cplx(2, -1)) < 1e-15);      // -i*i + 1*(1-i)
}

TEST_CASE("simd and scalar kernels agree on random inputs") {
  if (k::detect() != k::Isa::Avx2) {
    MESSAGE("AVX2 unavailable, equivalence suite skipped");
    return;
  }
  Rng shapes(42);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t m = 1 + shapes.below(17);
    const size_t kk = 1 + shapes.below(23);
    const size_t n = 1 + shapes.below(19);
    auto a = random_buf(m * kk, 100 + trial);
    auto b = random_buf(kk * n, 200 + trial);
    auto c0 = random_buf(m * n, 300 + trial);
    auto c1 = c0;
    k::detail::gemm_acc_scalar(a.data(), b.data(), c0.data(), m, kk, n);
    k::detail::gemm_acc_avx2(a.data(), b.data(), c1.data(), m, kk, n);
    CHECK(max_abs_diff(c0, c1) < 1e-13 * static_cast<double>(kk));

    auto x = random_buf(n * m, 400 + trial);
    auto y0 = random_buf(n * m, 500 + trial);
    auto y1 = y0;
    const cplx alpha(0.3, -0.7);
    k::detail::axpy_scalar(alpha, x.data(), y0.data(), n * m);
    k::detail::axpy_avx2(alpha, x.data(), y1.data(), n * m);
    CHECK(max_abs_diff(y0, y1) < 1e-14);

    auto z0 = y0;
    auto z1 = y0;
    k::detail::scal_scalar(alpha, z0.data(), z0.size());
    k::detail::scal_avx2(alpha, z1.data(), z1.size());
    CHECK(max_abs_diff(z0, z1) < 1e-14);

    CHECK(std::abs(k::detail::nrm2_sq_scalar(x.data(), x.size()) -
                   k::detail::nrm2_sq_avx2(x.data(), x.size())) <
          1e-13 * static_cast<double>(x.size()));
    CHECK(std::abs(k::detail::dotc_scalar(x.data(), y0.data(), x.size()) -
                   k::detail::dotc_avx2(x.data(), y0.data(), x.size())) <
          1e-13 * static_cast<double>(x.size()));
  }
}

TEST_CASE("isa override round trip") {
  const k::Isa best = k::detect();
  k::set_isa(k::Isa::Scalar);
  CHECK(k::active() == k::Isa::Scalar);
  auto a = random_buf(9, 1);
  auto b = random_buf(9, 2);
  std::vector<cplx> c(9, cplx(0));
  k::gemm_acc(a.data(), b.data(), c.data(), 3, 3, 3);  // runs scalar path
  k::set_isa(best);
  CHECK(k::active() == best);
  std::vector<cplx> c2(9, cplx(0));
  k::gemm_acc(a.data(), b.data(), c2.data(), 3, 3, 3);
  CHECK(max_abs_diff(c, c2) < 1e-13);
}

TEST_CASE("adjoint helper") {
  auto a = random_buf(6, 7);
  std::vector<cplx> at(6);
  k::adjoint(a.data(), at.data(), 2, 3);
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 3; ++j) CHECK(at[j * 2 + i] == std::conj(a[i * 3 + j]));
}
