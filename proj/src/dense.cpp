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

#include "qtt/dense.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace qtt::dense {

namespace {
constexpr double kDegenerateGap = 1e-13;
}

Eigen::Map<const RowMat> map(const cplx* a, size_t m, size_t n) {
  return Eigen::Map<const RowMat>(a, static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
}

TruncatedSvd svd_truncated(const cplx* a, size_t m, size_t n, double rel_tol, size_t max_rank) {
  const auto mat = map(a, m, n);
  MatrixXcd u;
  VectorXd s;
  MatrixXcd v;
  if (std::min(m, n) > 32) {
    Eigen::BDCSVD<MatrixXcd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    s = svd.singularValues();
    v = svd.matrixV();
  } else {
    Eigen::JacobiSVD<MatrixXcd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    s = svd.singularValues();
    v = svd.matrixV();
  }
  const size_t full = static_cast<size_t>(s.size());
  double total = 0.0;
  for (size_t i = 0; i < full; ++i) total += s[i] * s[i];

  size_t rank = full;
  if (total > 0.0 && rel_tol > 0.0) {
    const double budget = rel_tol * rel_tol * total;
    double tail = 0.0;
    rank = full;
    while (rank > 1) {
      const double next = tail + s[rank - 1] * s[rank - 1];
      if (next > budget) break;
      tail = next;
      --rank;
    }
    // never split a degenerate cluster at the tolerance boundary: keep it
    while (rank < full && s[rank] > s[rank - 1] * (1.0 - kDegenerateGap)) ++rank;
  }
  if (total == 0.0) rank = 1;  // zero matrix keeps a single null direction
  if (max_rank > 0 && rank > max_rank) {
    rank = max_rank;
    // if the cap lands inside a cluster, drop the whole cluster
    while (rank > 1 && s[rank] > s[rank - 1] * (1.0 - kDegenerateGap)) --rank;
  }

  TruncatedSvd out;
  out.rank = rank;
  out.total_sq = total;
  out.discarded_sq = 0.0;
  for (size_t i = rank; i < full; ++i) out.discarded_sq += s[i] * s[i];
  out.u.resize(m * rank);
  out.s.resize(rank);
  out.vh.resize(rank * n);
  for (size_t i = 0; i < rank; ++i) out.s[i] = s[static_cast<Eigen::Index>(i)];
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < rank; ++j)
      out.u[i * rank + j] = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  for (size_t i = 0; i < rank; ++i)
    for (size_t j = 0; j < n; ++j)
      out.vh[i * n + j] = std::conj(v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
  return out;
}

void qr_thin(const cplx* a, size_t m, size_t n, std::vector<cplx>& q, std::vector<cplx>& r_fac) {
  const auto mat = map(a, m, n);
  const size_t r = std::min(m, n);
  Eigen::HouseholderQR<MatrixXcd> qr(mat);
  MatrixXcd qfull = qr.householderQ() * MatrixXcd::Identity(static_cast<Eigen::Index>(m),
                                                            static_cast<Eigen::Index>(r));
  MatrixXcd rmat = qr.matrixQR()
                       .topRows(static_cast<Eigen::Index>(r))
                       .triangularView<Eigen::Upper>();
  q.resize(m * r);
  r_fac.resize(r * n);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < r; ++j)
      q[i * r + j] = qfull(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < n; ++j)
      r_fac[i * n + j] = rmat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

void lq_thin(const cplx* a, size_t m, size_t n, std::vector<cplx>& l_fac, std::vector<cplx>& q) {
  // LQ(A) from QR(A^H): A = (Q R)^H with R^H lower triangular.
  std::vector<cplx> ah(n * m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j) ah[j * m + i] = std::conj(a[i * n + j]);
  std::vector<cplx> qh, rh;
  qr_thin(ah.data(), n, m, qh, rh);
  const size_t r = std::min(m, n);
  l_fac.resize(m * r);
  q.resize(r * n);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < r; ++j) l_fac[i * r + j] = std::conj(rh[j * m + i]);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < n; ++j) q[i * n + j] = std::conj(qh[j * r + i]);
}

VectorXcd solve_regularized(const MatrixXcd& a, const VectorXcd& b, double eps, bool& regularized) {
  regularized = false;
  Eigen::PartialPivLU<MatrixXcd> lu(a);
  VectorXcd x = lu.solve(b);
  const double resid = (a * x - b).norm();
  const double scale = b.norm() + a.norm();
  if (!x.allFinite() || resid > 1e-6 * (scale > 0 ? scale : 1.0)) {
    regularized = true;
    MatrixXcd areg = a;
    areg.diagonal().array() += eps;
    x = Eigen::PartialPivLU<MatrixXcd>(areg).solve(b);
  }
  return x;
}

MatrixXcd expm(const MatrixXcd& a) { return a.exp(); }

}  // namespace qtt::dense
