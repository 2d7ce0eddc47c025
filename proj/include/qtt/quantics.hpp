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

#include "qtt/tt.hpp"

// Quantics-encoded bosonic states and operators. A register of R bits spans
// Fock states n in {0 .. 2^R-1} (or 2^R uniform grid points of a box in the
// position domain); site 0 carries the most significant bit.

namespace qtt::quantics {

enum class Domain { Fock, Position };

struct QuanticsLayout {
  size_t bits = 1;
  Domain domain = Domain::Fock;
  double box_length = 0.0;  // position domain only

  size_t levels() const { return size_t(1) << bits; }
};

/// n -> most-significant-first bit tuple of length `bits`.
std::vector<size_t> encode(std::uint64_t n, size_t bits);
std::uint64_t decode(const std::vector<size_t>& sigma);

/// |n> as a rank-1 train on a Fock register.
TensorTrain fock_state(std::uint64_t n, size_t bits);

/// Exact rank-(m+1) train of the polynomial sum_p coeffs[p] * n^p.
TensorTrain polynomial_qtt(size_t bits, const std::vector<double>& coeffs);

/// Promotes a diagonal's QTT to the diagonal MPO with the same bonds.
MPO diagonal_mpo(const TensorTrain& qtt);

/// Generalized shift T[i,j] = delta_{i+m, j}, no wrap-around. Rank <= 2.
MPO shift_mpo(size_t bits, std::int64_t m);

/// Ladder operators, A[n,n'] = delta_{n+1,n'} sqrt(n'), built as the
/// shift times the TCI'd diagonal of sqrt(n).
MPO annihilation_mpo(size_t bits, double tol);
MPO creation_mpo(size_t bits, double tol);

/// a^m with matrix elements delta_{n+m,n'} sqrt(n'!/n!); the falling
/// factorial is evaluated in the log domain, never via two factorials.
MPO annihilation_power_mpo(size_t bits, size_t m, double tol);

/// (a^dag)^m a^m = diag of prod_{p<m} (n - p); exact, rank m+1.
MPO number_power_mpo(size_t bits, size_t m);

/// diag(n), exact rank 2.
MPO number_mpo(size_t bits);

/// Coherent state |alpha> on a Fock register, normalized. Requires
/// |alpha|^2 <= 2^bits / 3 so the truncated tail is negligible;
/// check_support = false skips that guard for states that still fit the
/// register, e.g. the operator error metric at alpha = 2^{(R-1)/2}.
TensorTrain coherent_state_qtt(cplx alpha, size_t bits, double tol, bool check_support = true);

/// Recommended box for hermite_transform_mpo: every kept Hermite function
/// is supported well inside [-L/2, L/2).
double default_box_length(size_t n_bits);

/// Uniform grid x_k = -L/2 + L k / 2^bits.
std::vector<double> position_grid(size_t x_bits, double box_length);

/// Normalized Hermite function phi_n(x) by stable recurrence with the
/// Gaussian absorbed.
double hermite_function(unsigned n, double x);

struct HermiteTransform {
  MPO forward;   // position samples from Fock coefficients: psi(x_k) = sum_n U[k,n] psi_n
  MPO backward;  // Fock coefficients from samples: psi_n = dx * sum_k U[k,n] psi(x_k)
  size_t n_bits = 0, x_bits = 0;
  double box_length = 0.0;
};

HermiteTransform hermite_transform_mpo(size_t n_bits, size_t x_bits, double box_length,
                                       double tol);

}  // namespace qtt::quantics
