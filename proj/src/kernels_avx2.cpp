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

// AVX2+FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; it must never be entered on CPUs without those features.

#include <immintrin.h>

#include "qtt/kernels.hpp"

namespace qtt::kernels::detail {

namespace {

// One __m256d holds two complex doubles [re0, im0, re1, im1].
// Complex FMA: acc += a * b with a broadcast scalar (ar, ai):
//   t   = ai * swap(b)
//   acc += fmaddsub(ar, b, t)  ->  [ar*br - ai*bi, ar*bi + ai*br]
inline __m256d cmul_acc(__m256d acc, __m256d ar, __m256d ai, __m256d b) {
  __m256d bsw = _mm256_permute_pd(b, 0x5);
  __m256d t = _mm256_mul_pd(ai, bsw);
  return _mm256_add_pd(acc, _mm256_fmaddsub_pd(ar, b, t));
}

}  // namespace

void gemm_acc_avx2(const cplx* a, const cplx* b, cplx* c, size_t m, size_t k, size_t n) {
  const double* bp = reinterpret_cast<const double*>(b);
  double* cp = reinterpret_cast<double*>(c);
  const size_t n4 = n - n % 4;
  for (size_t i = 0; i < m; ++i) {
    const cplx* arow = a + i * k;
    double* crow = cp + 2 * i * n;
    for (size_t p = 0; p < k; ++p) {
      const cplx aik = arow[p];
      if (aik == cplx(0.0, 0.0)) continue;
      const __m256d ar = _mm256_set1_pd(aik.real());
      const __m256d ai = _mm256_set1_pd(aik.imag());
      const double* brow = bp + 2 * p * n;
      size_t j = 0;
      for (; j < n4; j += 4) {
        __m256d c0 = _mm256_loadu_pd(crow + 2 * j);
        __m256d c1 = _mm256_loadu_pd(crow + 2 * j + 4);
        c0 = cmul_acc(c0, ar, ai, _mm256_loadu_pd(brow + 2 * j));
        c1 = cmul_acc(c1, ar, ai, _mm256_loadu_pd(brow + 2 * j + 4));
        _mm256_storeu_pd(crow + 2 * j, c0);
        _mm256_storeu_pd(crow + 2 * j + 4, c1);
      }
      for (; j + 2 <= n; j += 2) {
        __m256d c0 = _mm256_loadu_pd(crow + 2 * j);
        c0 = cmul_acc(c0, ar, ai, _mm256_loadu_pd(brow + 2 * j));
        _mm256_storeu_pd(crow + 2 * j, c0);
      }
      if (j < n) {
        cplx* crowc = c + i * n;
        crowc[j] += aik * b[p * n + j];
      }
    }
  }
}

void axpy_avx2(cplx alpha, const cplx* x, cplx* y, size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    __m256d v = _mm256_loadu_pd(yp + 2 * j);
    v = cmul_acc(v, ar, ai, _mm256_loadu_pd(xp + 2 * j));
    _mm256_storeu_pd(yp + 2 * j, v);
  }
  for (; j < n; ++j) y[j] += alpha * x[j];
}

void scal_avx2(cplx alpha, cplx* x, size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  double* xp = reinterpret_cast<double*>(x);
  size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    __m256d b = _mm256_loadu_pd(xp + 2 * j);
    __m256d bsw = _mm256_permute_pd(b, 0x5);
    __m256d t = _mm256_mul_pd(ai, bsw);
    _mm256_storeu_pd(xp + 2 * j, _mm256_fmaddsub_pd(ar, b, t));
  }
  for (; j < n; ++j) x[j] *= alpha;
}

double nrm2_sq_avx2(const cplx* x, size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    __m256d v = _mm256_loadu_pd(xp + 2 * j);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, acc);
  double s = buf[0] + buf[1] + buf[2] + buf[3];
  for (; j < n; ++j) s += x[j].real() * x[j].real() + x[j].imag() * x[j].imag();
  return s;
}

cplx dotc_avx2(const cplx* x, const cplx* y, size_t n) {
  // conj(x) * y = [xr*yr + xi*yi, xr*yi - xi*yr]
  const double* xp = reinterpret_cast<const double*>(x);
  const double* yp = reinterpret_cast<const double*>(y);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  size_t j = 0;
  for (; j + 2 <= n; j += 2) {
    __m256d xv = _mm256_loadu_pd(xp + 2 * j);
    __m256d yv = _mm256_loadu_pd(yp + 2 * j);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    __m256d ysw = _mm256_permute_pd(yv, 0x5);
    acc_im = _mm256_fmadd_pd(xv, ysw, acc_im);
  }
  alignas(32) double re[4], im[4];
  _mm256_store_pd(re, acc_re);
  _mm256_store_pd(im, acc_im);
  // re lanes: xr*yr at even, xi*yi at odd -> sum all.
  // im lanes: xr*yi at even, xi*yr at odd -> even minus odd.
  cplx s(re[0] + re[1] + re[2] + re[3], im[0] - im[1] + im[2] - im[3]);
  for (; j < n; ++j) s += std::conj(x[j]) * y[j];
  return s;
}

}  // namespace qtt::kernels::detail
