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

#include "qtt/kernels.hpp"

namespace qtt::kernels {

namespace detail {

void gemm_acc_scalar(const cplx* a, const cplx* b, cplx* c, size_t m, size_t k, size_t n) {
  // i-k-j order: streams rows of B and C.
  for (size_t i = 0; i < m; ++i) {
    const cplx* arow = a + i * k;
    cplx* crow = c + i * n;
    for (size_t p = 0; p < k; ++p) {
      const cplx aik = arow[p];
      if (aik == cplx(0.0, 0.0)) continue;
      const cplx* brow = b + p * n;
      for (size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

void axpy_scalar(cplx alpha, const cplx* x, cplx* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scal_scalar(cplx alpha, cplx* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double nrm2_sq_scalar(const cplx* x, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

cplx dotc_scalar(const cplx* x, const cplx* y, size_t n) {
  cplx s{0.0, 0.0};
  for (size_t i = 0; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

}  // namespace detail

namespace {

struct Dispatch {
  void (*gemm_acc)(const cplx*, const cplx*, cplx*, size_t, size_t, size_t);
  void (*axpy)(cplx, const cplx*, cplx*, size_t);
  void (*scal)(cplx, cplx*, size_t);
  double (*nrm2_sq)(const cplx*, size_t);
  cplx (*dotc)(const cplx*, const cplx*, size_t);
};

constexpr Dispatch kScalar{
    detail::gemm_acc_scalar, detail::axpy_scalar, detail::scal_scalar,
    detail::nrm2_sq_scalar, detail::dotc_scalar};

#ifdef QTT_HAVE_AVX2_TU
constexpr Dispatch kAvx2{
    detail::gemm_acc_avx2, detail::axpy_avx2, detail::scal_avx2,
    detail::nrm2_sq_avx2, detail::dotc_avx2};
#endif

Isa g_isa = detect();
Dispatch g_dispatch = [] {
#ifdef QTT_HAVE_AVX2_TU
  if (detect() == Isa::Avx2) return kAvx2;
#endif
  return kScalar;
}();

}  // namespace

Isa detect() {
#ifdef QTT_HAVE_AVX2_TU
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

Isa active() { return g_isa; }

void set_isa(Isa isa) {
  if (isa == Isa::Avx2) {
#ifdef QTT_HAVE_AVX2_TU
    if (detect() != Isa::Avx2) throw std::runtime_error("AVX2 not supported on this CPU");
    g_isa = Isa::Avx2;
    g_dispatch = kAvx2;
    return;
#else
    throw std::runtime_error("AVX2 kernels not built");
#endif
  }
  g_isa = Isa::Scalar;
  g_dispatch = kScalar;
}

void gemm_acc(const cplx* a, const cplx* b, cplx* c, size_t m, size_t k, size_t n) {
  g_dispatch.gemm_acc(a, b, c, m, k, n);
}

void axpy(cplx alpha, const cplx* x, cplx* y, size_t n) { g_dispatch.axpy(alpha, x, y, n); }

void scal(cplx alpha, cplx* x, size_t n) { g_dispatch.scal(alpha, x, n); }

double nrm2_sq(const cplx* x, size_t n) { return g_dispatch.nrm2_sq(x, n); }

cplx dotc(const cplx* x, const cplx* y, size_t n) { return g_dispatch.dotc(x, y, n); }

void adjoint(const cplx* src, cplx* dst, size_t m, size_t n) {
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j) dst[j * m + i] = std::conj(src[i * n + j]);
}

}  // namespace qtt::kernels
