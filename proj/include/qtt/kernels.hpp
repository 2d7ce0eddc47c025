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

#pragma once

#include "qtt/common.hpp"

// Complex-double arithmetic kernels underlying every tensor contraction.
// Each kernel exists as a scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The variant is selected once at startup from CPUID;
// set_isa() overrides the choice (used by the equivalence tests).

namespace qtt::kernels {

enum class Isa { Scalar, Avx2 };

/// Currently active instruction set.
Isa active();

/// Force a specific instruction set. Throws if unsupported on this CPU.
void set_isa(Isa isa);

/// Best ISA this CPU supports.
Isa detect();

/// C (m x n) += A (m x k) * B (k x n). Row-major, contiguous.
void gemm_acc(const cplx* a, const cplx* b, cplx* c, size_t m, size_t k, size_t n);

/// y += alpha * x.
void axpy(cplx alpha, const cplx* x, cplx* y, size_t n);

/// x *= alpha.
void scal(cplx alpha, cplx* x, size_t n);

/// sum_i |x_i|^2.
double nrm2_sq(const cplx* x, size_t n);

/// sum_i conj(x_i) * y_i.
cplx dotc(const cplx* x, const cplx* y, size_t n);

/// dst (n x m) = conj(transpose(src)) of src (m x n). Row-major.
void adjoint(const cplx* src, cplx* dst, size_t m, size_t n);

namespace detail {
void gemm_acc_scalar(const cplx* a, const cplx* b, cplx* c, size_t m, size_t k, size_t n);
void axpy_scalar(cplx alpha, const cplx* x, cplx* y, size_t n);
void scal_scalar(cplx alpha, cplx* x, size_t n);
double nrm2_sq_scalar(const cplx* x, size_t n);
cplx dotc_scalar(const cplx* x, const cplx* y, size_t n);

void gemm_acc_avx2(const cplx* a, const cplx* b, cplx* c, size_t m, size_t k, size_t n);
void axpy_avx2(cplx alpha, const cplx* x, cplx* y, size_t n);
void scal_avx2(cplx alpha, cplx* x, size_t n);
double nrm2_sq_avx2(const cplx* x, size_t n);
cplx dotc_avx2(const cplx* x, const cplx* y, size_t n);
}  // namespace detail

}  // namespace qtt::kernels
