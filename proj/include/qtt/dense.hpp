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

#include <Eigen/Dense>

#include "qtt/common.hpp"

// Dense factorization layer. Tensor cores are stored row-major; this file
// bridges them to Eigen for SVD/QR/eigen decompositions and small solves.

namespace qtt::dense {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

Eigen::Map<const RowMat> map(const cplx* a, size_t m, size_t n);

struct TruncatedSvd {
  std::vector<cplx> u;    // m x rank, row-major
  std::vector<double> s;  // rank singular values, descending
  std::vector<cplx> vh;   // rank x n, row-major
  size_t rank = 0;
  double discarded_sq = 0.0;  // sum of squared dropped singular values
  double total_sq = 0.0;      // sum of all squared singular values
};

/// Rank-revealing SVD with discarded-weight truncation: the smallest rank
/// such that sum of squared dropped singular values <= rel_tol^2 * total.
/// A degenerate cluster at the cut (relative gap below 1e-13) is kept or
/// dropped as a whole, and max_rank (0 = unlimited) caps the result.
TruncatedSvd svd_truncated(const cplx* a, size_t m, size_t n, double rel_tol, size_t max_rank);

/// Thin QR: a (m x n) = q (m x r) * r_fac (r x n), r = min(m, n),
/// q with orthonormal columns. Row-major buffers.
void qr_thin(const cplx* a, size_t m, size_t n, std::vector<cplx>& q, std::vector<cplx>& r_fac);

/// Thin LQ: a (m x n) = l_fac (m x r) * q (r x n), q with orthonormal rows.
void lq_thin(const cplx* a, size_t m, size_t n, std::vector<cplx>& l_fac, std::vector<cplx>& q);

/// Solve a (dim x dim) * x = b by partial-pivot LU. If the matrix is close
/// to singular, retries with a ridge `eps` added to the diagonal and sets
/// `regularized`.
VectorXcd solve_regularized(const MatrixXcd& a, const VectorXcd& b, double eps, bool& regularized);

/// Matrix exponential of a small dense matrix (used on Krylov subspaces).
MatrixXcd expm(const MatrixXcd& a);

}  // namespace qtt::dense
