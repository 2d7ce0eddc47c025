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

#include "qtt/schrodinger.hpp"

#include <cmath>

#include "qtt/dense.hpp"
#include "qtt/kernels.hpp"

namespace qtt::schrodinger {

TimeDependentHamiltonian TimeDependentHamiltonian::make(MPO h0_in, std::optional<MPO> h1_in,
                                                        std::function<double(double)> drive_in,
                                                        const TruncationPolicy& precompute) {
  TimeDependentHamiltonian h;
  h.h0 = std::move(h0_in);
  h.h1 = std::move(h1_in);
  h.drive = std::move(drive_in);
  h.h0_sq = mpo_mul(h.h0, h.h0, precompute);
  if (h.h1) {
    if (!h.drive) throw DimensionError("time-dependent Hamiltonian needs a drive function");
    MPO h0h1 = mpo_mul(h.h0, *h.h1, precompute);
    MPO h1h0 = mpo_mul(*h.h1, h.h0, precompute);
    MPO minus_h1h0 = h1h0;
    mpo_scale(minus_h1h0, -1.0);
    h.commutator = mpo_add(h0h1, minus_h1h0, precompute);
    h.anticommutator = mpo_add(h0h1, h1h0, precompute);
    h.h1_sq = mpo_mul(*h.h1, *h.h1, precompute);
  }
  return h;
}

namespace {

// -i H(t) v
TensorTrain apply_rhs(const TimeDependentHamiltonian& h, const TensorTrain& v, double t,
                      const TruncationPolicy& policy) {
  TensorTrain r = apply_mpo(h.h0, v, ApplyMethod::Zipup, policy);
  if (h.h1) {
    TensorTrain r1 = apply_mpo(*h.h1, v, ApplyMethod::Zipup, policy);
    scale(r1, h.f(t));
    r = add(r, r1, policy);
  }
  scale(r, cplx(0, -1));
  return r;
}

TensorTrain axpy_tt(const TensorTrain& x, cplx a, const TensorTrain& y,
                    const TruncationPolicy& policy) {
  TensorTrain ys = y;
  scale(ys, a);
  return add(x, ys, policy);
}

}  // namespace

TensorTrain rk4_step(const TimeDependentHamiltonian& h, const TensorTrain& psi, double t,
                     double dt, const TruncationPolicy& policy) {
  const double n0 = psi.norm();
  TensorTrain k1 = apply_rhs(h, psi, t, policy);
  TensorTrain k2 = apply_rhs(h, axpy_tt(psi, dt / 2, k1, policy), t + dt / 2, policy);
  TensorTrain k3 = apply_rhs(h, axpy_tt(psi, dt / 2, k2, policy), t + dt / 2, policy);
  TensorTrain k4 = apply_rhs(h, axpy_tt(psi, dt, k3, policy), t + dt, policy);
  TensorTrain out = psi;
  out = axpy_tt(out, dt / 6, k1, policy);
  out = axpy_tt(out, dt / 3, k2, policy);
  out = axpy_tt(out, dt / 3, k3, policy);
  out = axpy_tt(out, dt / 6, k4, policy);
  if (std::abs(out.norm() - n0) > 0.1 * n0)
    throw ConvergenceError(
        "rk4_step: norm drifted by more than 10% in one step; the step size is "
        "too large for the stiffest retained scale");
  return out;
}

namespace {

// 1 + s1 H(t) + s2 H(t)^2 assembled from the precomputed pieces
MPO taylor_propagator(const TimeDependentHamiltonian& h, double t, cplx s1, cplx s2,
                      const TruncationPolicy& policy) {
  const double ft = h.f(t);
  MPO acc = identity_mpo(h.dims());
  MPO term = h.h0;
  mpo_scale(term, s1);
  acc = mpo_add(acc, term, policy);
  term = *h.h0_sq;
  mpo_scale(term, s2);
  acc = mpo_add(acc, term, policy);
  if (h.h1) {
    term = *h.h1;
    mpo_scale(term, s1 * ft);
    acc = mpo_add(acc, term, policy);
    term = *h.anticommutator;
    mpo_scale(term, s2 * ft);
    acc = mpo_add(acc, term, policy);
    term = *h.h1_sq;
    mpo_scale(term, s2 * ft * ft);
    acc = mpo_add(acc, term, policy);
  }
  return acc;
}

}  // namespace

TensorTrain crank_nicolson_step(const TimeDependentHamiltonian& h, const TensorTrain& psi,
                                double t, double dt, const TruncationPolicy& policy,
                                AlsReport* report) {
  // U(t, dt/2) psi = U(t+dt, -dt/2) psi(t+dt), both expanded to second order
  const cplx mi(0, -1);
  MPO rhs_op = taylor_propagator(h, t, mi * (dt / 2), cplx(-dt * dt / 8.0), policy);
  MPO lhs_op = taylor_propagator(h, t + dt, -mi * (dt / 2), cplx(-dt * dt / 8.0), policy);
  TensorTrain b = apply_mpo(rhs_op, psi, ApplyMethod::Fit, policy);
  return als_linear_solve(lhs_op, b, b, policy, report);
}

MagnusCoefficients magnus_average(const TimeDependentHamiltonian& h, double t, double dt) {
  MagnusCoefficients c;
  c.t1 = t + (3.0 - std::sqrt(3.0)) / 6.0 * dt;
  c.t2 = t + (3.0 + std::sqrt(3.0)) / 6.0 * dt;
  const double f1 = h.f(c.t1), f2 = h.f(c.t2);
  c.c_sum = 0.5 * (f1 + f2);
  c.c_comm = cplx(0, 1) * (std::sqrt(3.0) * dt / 12.0) * (f2 - f1);
  return c;
}

MPO magnus_hamiltonian(const TimeDependentHamiltonian& h, double t, double dt,
                       const TruncationPolicy& policy) {
  if (!h.h1) return h.h0;
  const MagnusCoefficients c = magnus_average(h, t, dt);
  MPO term = *h.h1;
  mpo_scale(term, c.c_sum);
  MPO acc = mpo_add(h.h0, term, policy);
  if (std::abs(c.c_comm) > 0) {
    term = *h.commutator;
    mpo_scale(term, c.c_comm);
    acc = mpo_add(acc, term, policy);
  }
  return acc;
}

std::vector<cplx> krylov_expm_apply(const std::function<void(const cplx*, cplx*)>& matvec,
                                    const std::vector<cplx>& x, cplx coeff, double tol,
                                    int max_vectors) {
  const size_t n = x.size();
  const double xnorm = std::sqrt(kernels::nrm2_sq(x.data(), n));
  if (xnorm == 0.0) return x;
  std::vector<std::vector<cplx>> basis;
  basis.emplace_back(x);
  kernels::scal(1.0 / xnorm, basis[0].data(), n);
  dense::MatrixXcd hess = dense::MatrixXcd::Zero(max_vectors + 1, max_vectors);
  std::vector<cplx> prev;
  for (int j = 0; j < max_vectors; ++j) {
    std::vector<cplx> w(n);
    matvec(basis[j].data(), w.data());
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= j; ++i) {
        const cplx hij = kernels::dotc(basis[i].data(), w.data(), n);
        if (pass == 0)
          hess(i, j) = hij;
        else
          hess(i, j) += hij;
        kernels::axpy(-hij, basis[i].data(), w.data(), n);
      }
    const double beta = std::sqrt(kernels::nrm2_sq(w.data(), n));
    hess(j + 1, j) = beta;
    const int k = j + 1;
    dense::MatrixXcd e = dense::expm(coeff * hess.topLeftCorner(k, k));
    std::vector<cplx> y(n, cplx(0));
    for (int i = 0; i < k; ++i) kernels::axpy(xnorm * e(i, 0), basis[i].data(), y.data(), n);
    if (!prev.empty()) {
      double diff = 0;
      for (size_t i = 0; i < n; ++i) diff += std::norm(y[i] - prev[i]);
      if (std::sqrt(diff) <= tol * xnorm) return y;
    }
    if (beta <= 1e-14 * xnorm) return y;  // invariant subspace
    prev = std::move(y);
    kernels::scal(1.0 / beta, w.data(), n);
    basis.push_back(std::move(w));
  }
  throw ConvergenceError("krylov_expm_apply: no convergence within the vector budget");
}

TensorTrain tdvp_step(const MPO& h_eff, TensorTrain psi, double dt, double krylov_tol) {
  const size_t L = psi.num_sites();
  canonicalize(psi, 0);
  using contract::Env;
  using contract::EnvDims;
  std::vector<Env> lenv(L + 1), renv(L + 1);
  std::vector<EnvDims> ld(L + 1), rd(L + 1);
  lenv[0] = {cplx(1.0)};
  renv[L] = {cplx(1.0)};
  for (size_t i = L; i-- > 1;)
    contract::op_transfer_right(renv[i + 1], rd[i + 1], psi.cores[i], h_eff.cores[i],
                                psi.cores[i], renv[i], rd[i]);

  const cplx fwd = cplx(0, -1) * (dt / 2);
  const cplx bwd = cplx(0, 1) * (dt / 2);

  auto site_matvec = [&](size_t i) {
    return [&, i](const cplx* in, cplx* out) {
      contract::apply_effective_1site(lenv[i], ld[i], h_eff.cores[i], renv[i + 1], rd[i + 1], in,
                                      out);
    };
  };
  auto bond_matvec = [&](size_t i) {
    // environments around the zero-site bond between i-1 and i
    return [&, i](const cplx* in, cplx* out) {
      contract::apply_effective_0site(lenv[i], ld[i], renv[i], rd[i], in, out);
    };
  };

  // left-to-right half steps
  for (size_t i = 0; i < L; ++i) {
    Core3& c = psi.cores[i];
    c.v = krylov_expm_apply(site_matvec(i), c.v, fwd, krylov_tol);
    if (i + 1 < L) {
      std::vector<cplx> q, rfac;
      dense::qr_thin(c.v.data(), c.l * c.d, c.r, q, rfac);
      const size_t rr = std::min(c.l * c.d, c.r);
      const size_t r_old = c.r;
      c.v = std::move(q);
      c.r = rr;
      contract::op_transfer_left(lenv[i], ld[i], c, h_eff.cores[i], c, lenv[i + 1], ld[i + 1]);
      // evolve the bond matrix backward, then absorb it rightward
      rfac = krylov_expm_apply(bond_matvec(i + 1), rfac, bwd, krylov_tol);
      Core3& nx = psi.cores[i + 1];
      std::vector<cplx> merged(rr * nx.d * nx.r, cplx(0));
      kernels::gemm_acc(rfac.data(), nx.v.data(), merged.data(), rr, r_old, nx.d * nx.r);
      nx.v = std::move(merged);
      nx.l = rr;
    }
  }
  // right-to-left half steps (site L-1 takes its two halves back to back)
  for (size_t i = L; i-- > 0;) {
    Core3& c = psi.cores[i];
    c.v = krylov_expm_apply(site_matvec(i), c.v, fwd, krylov_tol);
    if (i > 0) {
      std::vector<cplx> lfac, q;
      dense::lq_thin(c.v.data(), c.l, c.d * c.r, lfac, q);
      const size_t rr = std::min(c.l, c.d * c.r);
      const size_t l_old = c.l;
      c.v = std::move(q);
      c.l = rr;
      contract::op_transfer_right(renv[i + 1], rd[i + 1], c, h_eff.cores[i], c, renv[i], rd[i]);
      lfac = krylov_expm_apply(bond_matvec(i), lfac, bwd, krylov_tol);
      Core3& pv = psi.cores[i - 1];
      std::vector<cplx> merged(pv.l * pv.d * rr, cplx(0));
      kernels::gemm_acc(pv.v.data(), lfac.data(), merged.data(), pv.l * pv.d, l_old, rr);
      pv.v = std::move(merged);
      pv.r = rr;
    }
  }
  psi.center = 0;
  return psi;
}

Trajectory evolve(const TimeDependentHamiltonian& h, const TensorTrain& psi0,
                  const std::vector<double>& t_grid, Method method,
                  const TruncationPolicy& policy,
                  const std::vector<std::pair<std::string, MPO>>& observables,
                  const EvolveOptions& opts) {
  if (t_grid.size() < 2) throw DimensionError("evolve: need at least two grid times");
  const double dt = t_grid[1] - t_grid[0];
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (std::abs(t_grid[i] - t_grid[i - 1] - dt) > 1e-12 * std::abs(dt))
      throw DimensionError("evolve: grid must be uniform");

  Trajectory traj;
  TensorTrain psi = psi0;
  const bool tdvp = (method == Method::TdvpPlain || method == Method::TdvpMagnus);
  if (tdvp && opts.tdvp_pad_floor > 1) {
    pad_bonds(psi, opts.tdvp_pad_floor);
    canonicalize(psi, 0);
    traj.report.padded = true;
    traj.report.pad_floor = opts.tdvp_pad_floor;
  }
  // the plain-TDVP Hamiltonian is assembled once when time-independent
  std::optional<MPO> frozen;
  if (tdvp && !h.time_dependent()) frozen = h.h0;

  auto record = [&](double t, double residual) {
    const double norm = psi.norm();
    traj.times.push_back(t);
    for (const auto& [name, op] : observables) {
      const cplx v = sandwich(psi, op, psi) / (norm * norm);
      traj.observables[name].push_back(v);
    }
    traj.report.steps.push_back({t, psi.max_bond(), norm, residual});
    if (opts.observer) opts.observer(t, psi);
  };

  record(t_grid[0], 0.0);
  for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
    const double t = t_grid[i];
    double residual = 0.0;
    switch (method) {
      case Method::Rk4:
        psi = rk4_step(h, psi, t, dt, policy);
        break;
      case Method::CrankNicolson: {
        AlsReport rep;
        psi = crank_nicolson_step(h, psi, t, dt, policy, &rep);
        residual = rep.residual;
        break;
      }
      case Method::TdvpPlain: {
        MPO hstep = frozen ? *frozen : [&] {
          MPO term = *h.h1;
          mpo_scale(term, h.f(t));
          return mpo_add(h.h0, term, {1e-12, 0});
        }();
        psi = tdvp_step(hstep, std::move(psi), dt, opts.krylov_tol);
        break;
      }
      case Method::TdvpMagnus: {
        MPO homega = frozen ? *frozen : magnus_hamiltonian(h, t, dt);
        psi = tdvp_step(homega, std::move(psi), dt, opts.krylov_tol);
        break;
      }
    }
    record(t_grid[i + 1], residual);
  }
  traj.final_state = std::move(psi);
  return traj;
}

double overlap_error(const TensorTrain& a, const TensorTrain& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  return 1.0 - std::abs(inner(a, b)) / (na * nb);
}

}  // namespace qtt::schrodinger
