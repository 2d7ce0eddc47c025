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

#include "qtt/oracle.hpp"

#include "qtt/kernels.hpp"

namespace qtt::oracle {

dense::VectorXcd tt_to_dense(const TensorTrain& tt) {
  size_t total = 1;
  for (size_t d : tt.physical_dims()) {
    total *= d;
    if (total > kMaxStateDim) throw DimensionError("tt_to_dense: dimension cap exceeded");
  }
  std::vector<cplx> acc{cplx(1.0)};
  size_t rows = 1, bond = 1;
  for (const auto& c : tt.cores) {
    std::vector<cplx> next(rows * c.d * c.r, cplx(0));
    kernels::gemm_acc(acc.data(), c.v.data(), next.data(), rows, bond, c.d * c.r);
    acc = std::move(next);
    rows *= c.d;
    bond = c.r;
  }
  dense::VectorXcd v(static_cast<Eigen::Index>(rows));
  for (size_t i = 0; i < rows; ++i) v[static_cast<Eigen::Index>(i)] = acc[i];
  return v;
}

dense::MatrixXcd mpo_to_dense(const MPO& op) {
  size_t nr = 1, nc = 1, maxb = 1;
  for (const auto& c : op.cores) {
    nr *= c.dr;
    nc *= c.dc;
    maxb = std::max(maxb, c.r);
  }
  if (nr * nc > (size_t(1) << 24) / std::max<size_t>(maxb, 1) * 4 || nr * nc > (size_t(1) << 22))
    throw DimensionError("mpo_to_dense: dimension cap exceeded");
  // contract as a fused train, then unfuse the interleaved digits
  std::vector<cplx> acc{cplx(1.0)};
  size_t rows = 1, bond = 1;
  for (const auto& c : op.cores) {
    std::vector<cplx> next(rows * c.dr * c.dc * c.r, cplx(0));
    kernels::gemm_acc(acc.data(), c.v.data(), next.data(), rows, bond, c.dr * c.dc * c.r);
    acc = std::move(next);
    rows *= c.dr * c.dc;
    bond = c.r;
  }
  const auto rd = op.row_dims();
  const auto cd = op.col_dims();
  const size_t L = op.num_sites();
  dense::MatrixXcd m(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nc));
  std::vector<size_t> ri(L), ci(L);
  for (size_t r = 0; r < nr; ++r) {
    size_t x = r;
    for (size_t i = L; i-- > 0;) {
      ri[i] = x % rd[i];
      x /= rd[i];
    }
    for (size_t c = 0; c < nc; ++c) {
      size_t y = c;
      for (size_t i = L; i-- > 0;) {
        ci[i] = y % cd[i];
        y /= cd[i];
      }
      size_t flat = 0;
      for (size_t i = 0; i < L; ++i) flat = flat * (rd[i] * cd[i]) + (ri[i] * cd[i] + ci[i]);
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc[flat];
    }
  }
  return m;
}

std::vector<dense::VectorXcd> dense_schrodinger(const std::function<dense::MatrixXcd(double)>& h,
                                                const dense::VectorXcd& psi0,
                                                const std::vector<double>& t_grid, int substeps) {
  if (static_cast<size_t>(psi0.size()) > kMaxSchrodingerDim)
    throw DimensionError("dense_schrodinger: dimension cap exceeded");
  const cplx mi(0.0, -1.0);
  auto rhs = [&](double t, const dense::VectorXcd& psi) -> dense::VectorXcd {
    return mi * (h(t) * psi);
  };
  std::vector<dense::VectorXcd> out;
  out.reserve(t_grid.size());
  dense::VectorXcd psi = psi0;
  out.push_back(psi);
  for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
    const double dt = (t_grid[i + 1] - t_grid[i]) / substeps;
    double t = t_grid[i];
    for (int s = 0; s < substeps; ++s) {
      const auto k1 = rhs(t, psi);
      const auto k2 = rhs(t + dt / 2, psi + (dt / 2) * k1);
      const auto k3 = rhs(t + dt / 2, psi + (dt / 2) * k2);
      const auto k4 = rhs(t + dt, psi + dt * k3);
      psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
    }
    out.push_back(psi);
  }
  return out;
}

std::vector<dense::MatrixXcd> dense_lindblad(const DenseLindbladModel& model,
                                             const dense::MatrixXcd& rho0,
                                             const std::vector<double>& t_grid, int substeps) {
  if (static_cast<size_t>(rho0.rows()) > kMaxLindbladDim)
    throw DimensionError("dense_lindblad: dimension cap exceeded");
  std::vector<dense::MatrixXcd> ldl;
  for (const auto& l : model.jumps) ldl.push_back(l.adjoint() * l);
  const cplx mi(0.0, -1.0);
  auto rhs = [&](double t, const dense::MatrixXcd& rho) -> dense::MatrixXcd {
    const auto ht = model.h(t);
    dense::MatrixXcd d = mi * (ht * rho - rho * ht);
    for (size_t k = 0; k < model.jumps.size(); ++k) {
      const auto& l = model.jumps[k];
      d += l * rho * l.adjoint() - 0.5 * (ldl[k] * rho + rho * ldl[k]);
    }
    return d;
  };
  std::vector<dense::MatrixXcd> out;
  out.reserve(t_grid.size());
  dense::MatrixXcd rho = rho0;
  out.push_back(rho);
  for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
    const double dt = (t_grid[i + 1] - t_grid[i]) / substeps;
    double t = t_grid[i];
    for (int s = 0; s < substeps; ++s) {
      const auto k1 = rhs(t, rho);
      const auto k2 = rhs(t + dt / 2, rho + (dt / 2) * k1);
      const auto k3 = rhs(t + dt / 2, rho + (dt / 2) * k2);
      const auto k4 = rhs(t + dt, rho + dt * k3);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
    }
    out.push_back(rho);
  }
  return out;
}

double trace_distance(const dense::MatrixXcd& a, const dense::MatrixXcd& b) {
  Eigen::SelfAdjointEigenSolver<dense::MatrixXcd> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qtt::oracle
