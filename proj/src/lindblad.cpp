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

#include "qtt/lindblad.hpp"

#include <cmath>

namespace qtt::lindblad {

using purified::CompressionBudget;
using purified::PurifiedDensityMatrix;

LindbladModel LindbladModel::make(purified::ModeLayout layout, MPO h0, std::optional<MPO> h1,
                                  std::function<double(double)> drive, std::vector<MPO> jumps,
                                  const TruncationPolicy& precompute) {
  LindbladModel m;
  m.layout = std::move(layout);
  m.h0 = std::move(h0);
  m.h1 = std::move(h1);
  m.drive = std::move(drive);
  m.jumps = std::move(jumps);
  if (m.h1 && !m.drive) throw DimensionError("time-dependent Lindblad model needs a drive");

  m.h0_eff = m.h0;
  for (const auto& l : m.jumps) {
    MPO ldl = mpo_mul(mpo_adjoint(l), l, precompute);
    mpo_scale(ldl, cplx(0, -0.5));
    m.h0_eff = mpo_add(m.h0_eff, ldl, precompute);
  }
  m.h0_eff_sq = mpo_mul(m.h0_eff, m.h0_eff, precompute);
  if (m.h1) {
    MPO cross = mpo_add(mpo_mul(m.h0_eff, *m.h1, precompute),
                        mpo_mul(*m.h1, m.h0_eff, precompute), precompute);
    m.heff_cross = std::move(cross);
    m.h1_sq = mpo_mul(*m.h1, *m.h1, precompute);
  }
  return m;
}

namespace {

// Psi -> sum_j c_j Op_j Psi
PurifiedDensityMatrix apply_sum(const OperatorSum& sum, const PurifiedDensityMatrix& state,
                                const CompressionBudget& budget) {
  if (sum.empty()) throw DimensionError("empty Kraus operator");
  PurifiedDensityMatrix acc;
  bool first = true;
  for (const auto& term : sum) {
    PurifiedDensityMatrix part = purified::apply_operator(term.op, state, budget);
    scale(part.psi, term.coeff);
    if (first) {
      acc = std::move(part);
      first = false;
    } else {
      acc = purified::vector_add(acc, part, budget);
    }
  }
  return acc;
}

PurifiedDensityMatrix combine_branches(std::vector<PurifiedDensityMatrix>& branches,
                                       const CompressionBudget& budget) {
  PurifiedDensityMatrix acc = std::move(branches.front());
  for (size_t i = 1; i < branches.size(); ++i)
    acc = purified::matrix_add(acc, branches[i], budget);
  return acc;
}

OperatorSum identity_sum(const purified::ModeLayout& layout) {
  return {OperatorTerm{cplx(1.0), purified::chain_operator(layout, {})}};
}

void finish_step(PurifiedDensityMatrix& state, double* trace_pre) {
  const double tr = state.trace();
  if (trace_pre) *trace_pre = tr;
  if (tr < 1e-14) throw ConvergenceError("lindblad step: trace collapsed");
  state.renormalize();
}

}  // namespace

PurifiedDensityMatrix apply_kraus(const KrausMap& map, const PurifiedDensityMatrix& state,
                                  const CompressionBudget& budget) {
  if (map.operators.empty()) throw DimensionError("empty Kraus map");
  std::vector<PurifiedDensityMatrix> branches;
  branches.reserve(map.operators.size());
  for (const auto& op : map.operators) branches.push_back(apply_sum(op, state, budget));
  return combine_branches(branches, budget);
}

MPO LindbladModel::heff_at(double f_value, double tol) const {
  if (!h1 || f_value == 0.0) return h0_eff;
  MPO term = *h1;
  mpo_scale(term, f_value);
  return mpo_add(h0_eff, term, {tol, 0});
}

PurifiedDensityMatrix first_order_step(const LindbladModel& model,
                                       const PurifiedDensityMatrix& state, double t, double dt,
                                       const CompressionBudget& budget, double* trace_pre) {
  if (dt <= 0) throw DimensionError("first_order_step: dt must be positive");
  const double f_mid = model.f(t + dt / 2);
  const double tol = std::min(budget.tol_q, budget.tol_e);
  const MPO heff = model.heff_at(f_mid, tol);
  std::vector<PurifiedDensityMatrix> branches;
  {
    PurifiedDensityMatrix v1 = purified::apply_operator_raw(heff, state, tol);
    branches.push_back(
        purified::vector_combine({{cplx(1.0), &state}, {cplx(0, -dt), &v1}}, budget));
  }
  for (const auto& l : model.jumps) {
    PurifiedDensityMatrix b = purified::apply_operator_raw(l, state, tol);
    scale(b.psi, std::sqrt(dt));
    branches.push_back(std::move(b));
  }
  std::vector<const PurifiedDensityMatrix*> ptrs;
  for (const auto& b : branches) ptrs.push_back(&b);
  PurifiedDensityMatrix out = purified::matrix_combine(ptrs, budget);
  finish_step(out, trace_pre);
  return out;
}

PurifiedDensityMatrix second_order_step(const LindbladModel& model,
                                        const PurifiedDensityMatrix& state, double t, double dt,
                                        const CompressionBudget& budget, double* trace_pre) {
  if (dt <= 0) throw DimensionError("second_order_step: dt must be positive");
  const double f_mid = model.f(t + dt / 2);
  const double tol = std::min(budget.tol_q, budget.tol_e);
  const MPO heff = model.heff_at(f_mid, tol);

  std::vector<PurifiedDensityMatrix> branches;
  // U' Psi = Psi - i dt v1 - dt^2/2 H_eff v1 by nesting; identical to the
  // precomputed-square route up to truncation ordering, with only low-rank
  // operator products
  PurifiedDensityMatrix v1 = purified::apply_operator_raw(heff, state, tol);
  truncate(v1.psi, {tol, 0});
  {
    PurifiedDensityMatrix v2 = purified::apply_operator_raw(heff, v1, tol);
    branches.push_back(purified::vector_combine(
        {{cplx(1.0), &state}, {cplx(0, -dt), &v1}, {cplx(-0.5 * dt * dt), &v2}}, budget));
  }

  // composites are applied sequentially per branch, never pre-multiplied
  std::vector<PurifiedDensityMatrix> l_psi;
  l_psi.reserve(model.jumps.size());
  for (const auto& l : model.jumps)
    l_psi.push_back(purified::apply_operator(l, state, budget));

  const double w1 = std::sqrt(dt / 2.0);
  for (const auto& lp : l_psi) {
    // U L branch
    PurifiedDensityMatrix hlp = purified::apply_operator_raw(heff, lp, tol);
    branches.push_back(
        purified::vector_combine({{cplx(w1), &lp}, {cplx(0, -dt) * w1, &hlp}}, budget));
  }
  if (!model.jumps.empty()) {
    // L U branch; U_1 Psi reuses the H_eff Psi product
    PurifiedDensityMatrix u_psi =
        purified::vector_combine({{cplx(1.0), &state}, {cplx(0, -dt), &v1}}, budget);
    for (const auto& l : model.jumps) {
      PurifiedDensityMatrix b = purified::apply_operator_raw(l, u_psi, tol);
      scale(b.psi, w1);
      branches.push_back(std::move(b));
    }
  }
  const double w2 = dt / std::sqrt(2.0);
  for (const auto& l : model.jumps)
    for (const auto& lp : l_psi) {
      PurifiedDensityMatrix b = purified::apply_operator_raw(l, lp, tol);  // L^2 branches
      scale(b.psi, w2);
      branches.push_back(std::move(b));
    }

  std::vector<const PurifiedDensityMatrix*> ptrs;
  for (const auto& b : branches) ptrs.push_back(&b);
  PurifiedDensityMatrix out = purified::matrix_combine(ptrs, budget);
  finish_step(out, trace_pre);
  return out;
}

LindbladTrajectory evolve_lindblad(
    const LindbladModel& model, const PurifiedDensityMatrix& psi0,
    const std::vector<double>& t_grid, Scheme scheme, const CompressionBudget& budget,
    const std::vector<std::pair<std::string, MPO>>& observables,
    const std::function<void(double, const PurifiedDensityMatrix&)>& observer) {
  if (t_grid.size() < 2) throw DimensionError("evolve_lindblad: need at least two grid times");
  const double dt = t_grid[1] - t_grid[0];
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (std::abs(t_grid[i] - t_grid[i - 1] - dt) > 1e-12 * std::abs(dt))
      throw DimensionError("evolve_lindblad: grid must be uniform");

  LindbladTrajectory traj;
  PurifiedDensityMatrix state = psi0;

  auto record = [&](double t, double trace_pre) {
    LindbladRecord rec;
    rec.t = t;
    rec.trace_pre = trace_pre;
    rec.purity = state.purity();
    rec.chi_q = state.max_chi_q();
    rec.chi_e = state.max_chi_e();
    rec.chi_mu = state.mu_dim();
    rec.elements = state.element_count();
    traj.records.push_back(rec);
    traj.times.push_back(t);
    const double tr = state.trace();
    for (const auto& [name, op] : observables)
      traj.observables[name].push_back(purified::expectation(state, op) / tr);
    if (observer) observer(t, state);
  };

  record(t_grid[0], 1.0);
  for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
    double trace_pre = 1.0;
    try {
      state = (scheme == Scheme::Order1)
                  ? first_order_step(model, state, t_grid[i], dt, budget, &trace_pre)
                  : second_order_step(model, state, t_grid[i], dt, budget, &trace_pre);
    } catch (const std::exception& e) {
      traj.completed = false;
      traj.failure = e.what();
      break;
    }
    record(t_grid[i + 1], trace_pre);
  }
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace qtt::lindblad
