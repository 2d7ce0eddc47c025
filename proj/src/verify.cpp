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

#include "qtt/verify.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "qtt/lindblad.hpp"
#include "qtt/models.hpp"
#include "qtt/observables.hpp"
#include "qtt/oracle.hpp"
#include "qtt/quantics.hpp"
#include "qtt/schrodinger.hpp"

namespace qtt::verify {

namespace {

namespace q = qtt::quantics;
namespace pu = qtt::purified;
namespace lb = qtt::lindblad;
namespace sch = qtt::schrodinger;

std::vector<double> linspace(double a, double b, size_t n) {
  std::vector<double> t(n);
  for (size_t i = 0; i < n; ++i) t[i] = a + (b - a) * double(i) / double(n - 1);
  return t;
}

struct Check {
  std::ostringstream out;
  bool pass = true;

  void item(const std::string& what, double measured, const std::string& rel, double bound,
            bool ok) {
    pass = pass && ok;
    out << "    " << (ok ? "ok  " : "FAIL") << ' ' << what << ": " << measured << ' ' << rel
        << ' ' << bound << '\n';
  }
  void require(const std::string& what, double measured, double bound) {
    item(what, measured, "<", bound, measured < bound);
  }
  void require_between(const std::string& what, double measured, double lo, double hi) {
    const bool ok = measured > lo && measured < hi;
    pass = pass && ok;
    out << "    " << (ok ? "ok  " : "FAIL") << ' ' << what << ": " << measured << " in ("
        << lo << ", " << hi << ")\n";
  }
  void note(const std::string& text) { out << "    note " << text << '\n'; }
};

double slope_loglog(const std::vector<double>& h, const std::vector<double>& e) {
  // least-squares slope of log e against log h
  const size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(std::max(e[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (double(n) * sxy - sx * sy) / (double(n) * sxx - sx * sx);
}

dense::MatrixXcd exact_ladder(size_t bits) {
  const size_t n = size_t(1) << bits;
  dense::MatrixXcd a = dense::MatrixXcd::Zero(n, n);
  for (size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = std::sqrt(double(i + 1));
  return a;
}

// exact factorization of the probe state so the measured error is the
// operator's; the amplitude table is at most 2^20 entries
TensorTrain exact_coherent_probe(size_t bits) {
  const double alpha = std::pow(2.0, (double(bits) - 1.0) / 2.0);
  const size_t n = size_t(1) << bits;
  std::vector<cplx> amps(n);
  for (size_t k = 0; k < n; ++k) {
    const double lg = -0.5 * alpha * alpha + double(k) * std::log(alpha) -
                      0.5 * std::lgamma(double(k) + 1.0);
    amps[k] = std::exp(lg);
  }
  TensorTrain psi = tt_from_dense(amps, std::vector<size_t>(bits, 2), {1e-15, 0});
  scale(psi, 1.0 / psi.norm());
  return psi;
}

double coherent_ladder_metric(const MPO& a, size_t bits) {
  const double alpha = std::pow(2.0, (double(bits) - 1.0) / 2.0);
  TensorTrain psi = exact_coherent_probe(bits);
  return std::abs(sandwich(psi, a, psi) / alpha - 1.0);
}

// ---- criterion runners ----

CriterionResult c1_table_ranks() {
  Check ck;
  for (size_t bits : {8u, 12u, 16u, 20u}) {
    // one order tighter than the target so the bound probes the rank
    MPO a = q::annihilation_mpo(bits, 1e-13);
    ck.item("ladder rank at R=" + std::to_string(bits), double(a.max_bond()), "<=", 10.0,
            a.max_bond() <= 10);
    ck.require("coherent metric at R=" + std::to_string(bits), coherent_ladder_metric(a, bits),
               1e-12);
    if (bits <= 10) {
      const auto ref = exact_ladder(bits);
      const double dist = (oracle::mpo_to_dense(a) - ref).norm() / ref.norm();
      ck.require("dense distance at R=" + std::to_string(bits), dist, 1e-12);
    }
  }
  {
    MPO a10 = q::annihilation_mpo(10, 1e-13);
    const auto ref = exact_ladder(10);
    ck.require("dense distance at R=10", (oracle::mpo_to_dense(a10) - ref).norm() / ref.norm(),
               1e-12);
  }
  for (size_t m : {1u, 2u, 3u}) {
    MPO op = q::number_power_mpo(8, m);
    ck.item("number-power rank m=" + std::to_string(m), double(op.max_bond()), "==", double(m + 1),
            op.max_bond() == m + 1);
    auto d = oracle::mpo_to_dense(op);
    double err = 0;
    for (size_t i = 0; i < 256; ++i) {
      double val = 1.0;
      for (size_t p = 0; p < m; ++p) val *= double(i) - double(p);
      err = std::max(err, std::abs(d(i, i).real() - val));
      for (size_t j = 0; j < 256; ++j)
        if (i != j) err = std::max(err, std::abs(d(i, j)));
    }
    ck.require("number-power dense error m=" + std::to_string(m), err, 1e-9);
  }
  return {1, "ladder and number-power operator ranks", ck.pass, ck.out.str(), 0};
}

CriterionResult c2_error_decay() {
  Check ck;
  for (size_t bits : {8u, 12u, 16u, 20u}) {
    MPO a = q::annihilation_mpo(bits, 1e-13);
    mpo_truncate(a, {0.0, 10});
    ck.require("coherent metric at rank 10, R=" + std::to_string(bits),
               coherent_ladder_metric(a, bits), 1e-12);
  }
  return {2, "operator error at bond dimension 10", ck.pass, ck.out.str(), 0};
}

CriterionResult c3_integrator_orders() {
  Check ck;
  models::KerrParams p;
  p.bits = 6;
  p.alpha0 = 2.0;
  auto m = models::kerr_model(p);
  const double t_final = 1.0;
  const std::vector<double> hs{0.016, 0.008, 0.004};

  // dense reference state
  auto h0d = oracle::mpo_to_dense(m.h.h0);
  auto h1d = oracle::mpo_to_dense(*m.h.h1);
  auto ref_traj = oracle::dense_schrodinger(
      [&](double t) { return (h0d + p.f(t) * h1d).eval(); }, oracle::tt_to_dense(m.psi0),
      {0.0, t_final}, 4000);
  const auto& psi_ref = ref_traj.back();

  // the overlap error 1 - |<ref|psi>| is quadratic in the state error, so
  // the stated orders are measured on the phase-aligned distance sqrt(2 E)
  auto run_error = [&](sch::Method method, double h) {
    const size_t steps = static_cast<size_t>(std::round(t_final / h));
    auto traj = sch::evolve(m.h, m.psi0, linspace(0, t_final, steps + 1), method, {1e-10, 0});
    auto got = oracle::tt_to_dense(traj.final_state);
    const double e = 1.0 - std::abs(psi_ref.dot(got)) / got.norm();
    return std::sqrt(std::max(2.0 * e, 0.0));
  };

  std::map<std::string, std::vector<double>> errs;
  for (double h : hs) {
    errs["rk4"].push_back(run_error(sch::Method::Rk4, h));
    errs["cn"].push_back(run_error(sch::Method::CrankNicolson, h));
    errs["tdvp_plain"].push_back(run_error(sch::Method::TdvpPlain, h));
    errs["tdvp_magnus"].push_back(run_error(sch::Method::TdvpMagnus, h));
  }
  ck.require_between("rk4 slope", slope_loglog(hs, errs["rk4"]), 3.5, 4.5);
  ck.require_between("crank-nicolson slope", slope_loglog(hs, errs["cn"]), 1.5, 2.5);
  ck.require_between("plain tdvp slope", slope_loglog(hs, errs["tdvp_plain"]), 0.5, 1.5);
  for (size_t i = 0; i < hs.size(); ++i)
    ck.item("magnus below plain at h=" + std::to_string(hs[i]), errs["tdvp_magnus"][i], "<",
            errs["tdvp_plain"][i], errs["tdvp_magnus"][i] < errs["tdvp_plain"][i]);
  return {3, "integrator order fits on the Kerr benchmark", ck.pass, ck.out.str(), 0};
}

CriterionResult c4_semiclassical() {
  Check ck;
  models::KerrParams p;
  p.bits = 6;
  p.alpha0 = 2.0;
  p.kerr = 0.0;
  auto m = models::kerr_model(p);
  MPO a_op = q::annihilation_mpo(p.bits, 1e-12);
  auto grid = linspace(0, 5.0, 5001);
  auto traj = sch::evolve(m.h, m.psi0, grid, sch::Method::Rk4, {1e-11, 0}, {{"a", a_op}});
  auto alpha = models::semiclassical_kerr(p, grid, 20);
  double worst = 0;
  for (size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(traj.observables["a"][i] - alpha[i]));
  ck.require("max |<a> - alpha_sc| over [0, 5]", worst, 1e-6);
  return {4, "semiclassical exactness at K = 0", ck.pass, ck.out.str(), 0};
}

CriterionResult c5_lindblad_oracle() {
  Check ck;
  pu::ModeLayout layout{{{3, pu::BasisTag::Fock}, {3, pu::BasisTag::Fock}}};
  MPO a_op = q::annihilation_mpo(3, 1e-12);
  MPO adag = mpo_adjoint(a_op);
  MPO h0 = pu::chain_operator(layout, {{0, adag}, {1, a_op}});
  {
    MPO t = pu::chain_operator(layout, {{0, a_op}, {1, adag}});
    h0 = mpo_add(h0, t, {1e-13, 0});
    mpo_scale(h0, 0.7);
  }
  MPO la = pu::chain_operator(layout, {{0, a_op}});
  mpo_scale(la, std::sqrt(0.4));
  MPO lb_op = pu::chain_operator(layout, {{1, a_op}});
  mpo_scale(lb_op, std::sqrt(0.9));
  auto model = lb::LindbladModel::make(layout, h0, {}, {}, {la, lb_op});
  auto st = pu::from_pure_product({q::fock_state(2, 3), q::fock_state(0, 3)}, layout);
  const auto budget = pu::CompressionBudget::uniform(1e-8);
  const double t_final = 0.5;

  oracle::DenseLindbladModel ref;
  auto h0d = oracle::mpo_to_dense(h0);
  ref.h = [&](double) { return h0d; };
  ref.jumps = {oracle::mpo_to_dense(la), oracle::mpo_to_dense(lb_op)};

  // trace-distance against the oracle at every output time of the budget run
  {
    auto grid = linspace(0, t_final, 126);
    auto traj = lb::evolve_lindblad(model, st, grid, lb::Scheme::Order2, budget, {});
    if (!traj.completed) ck.item("budget run completed", 0, "==", 1, false);
    auto rho_traj = oracle::dense_lindblad(ref, pu::dense_rho(st), grid, 50);
    // re-run recording distances at each tenth point
    pu::PurifiedDensityMatrix state = st;
    double worst = 0;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
      state = lb::second_order_step(model, state, grid[i], grid[i + 1] - grid[i], budget);
      dense::MatrixXcd rho = pu::dense_rho(state);
      rho /= rho.trace().real();
      dense::MatrixXcd oracle_rho = rho_traj[i + 1] / rho_traj[i + 1].trace().real();
      worst = std::max(worst, oracle::trace_distance(rho, oracle_rho));
    }
    ck.require("max trace distance to the dense oracle", worst, 1e-5);
  }
  // error slope in the step size
  {
    std::vector<double> hs, errs;
    auto rho_ref = oracle::dense_lindblad(ref, pu::dense_rho(st), {0.0, t_final}, 2000).back();
    rho_ref /= rho_ref.trace().real();
    for (int steps : {25, 50, 100}) {
      auto traj = lb::evolve_lindblad(model, st, linspace(0, t_final, steps + 1),
                                      lb::Scheme::Order2, pu::CompressionBudget::uniform(1e-11),
                                      {});
      dense::MatrixXcd rho = pu::dense_rho(traj.final_state);
      rho /= rho.trace().real();
      hs.push_back(t_final / steps);
      errs.push_back(oracle::trace_distance(rho, rho_ref));
    }
    ck.require_between("second-order slope", slope_loglog(hs, errs), 1.5, 2.5);
  }
  return {5, "two-mode Lindblad against the dense oracle", ck.pass, ck.out.str(), 0};
}

CriterionResult c6_amplitude_damping() {
  Check ck;
  const size_t bits = 3;
  const double kappa = 1.0;
  pu::ModeLayout layout{{{bits, pu::BasisTag::Fock}}};
  MPO h0 = pu::chain_operator(layout, {{0, q::number_mpo(bits)}});
  mpo_scale(h0, 0.0);
  MPO l = pu::chain_operator(layout, {{0, q::annihilation_mpo(bits, 1e-12)}});
  mpo_scale(l, std::sqrt(kappa));
  auto model = lb::LindbladModel::make(layout, h0, {}, {}, {l});
  auto st = pu::from_pure_product({q::fock_state(1, bits)}, layout);
  MPO n_chain = pu::chain_operator(layout, {{0, q::number_mpo(bits)}});
  const double dt = 1e-3 / kappa;
  auto grid = linspace(0, 3.0, size_t(3.0 / dt) + 1);
  auto traj = lb::evolve_lindblad(model, st, grid, lb::Scheme::Order2,
                                  pu::CompressionBudget::uniform(1e-10), {{"n", n_chain}});
  double worst = 0;
  for (size_t i = 0; i < traj.times.size(); ++i)
    worst = std::max(worst, std::abs(traj.observables["n"][i].real() -
                                     std::exp(-kappa * traj.times[i])));
  ck.require("max |<n>(t) - exp(-kt)|", worst, 1e-4);
  return {6, "amplitude damping closed form", ck.pass, ck.out.str(), 0};
}

CriterionResult c7_cat_z_gate() {
  Check ck;
  double prev_pz = 1e9;
  for (double a2 : {2.0, 4.0, 8.0}) {
    models::CatParams p;
    p.epsilon_d = a2;  // g2 = 1
    p.bits_a = (a2 <= 2.0) ? 3 : (a2 <= 4.0 ? 4 : 5);
    p.bits_b = 3;
    auto model = models::cat_model(p);
    auto st = models::cat_plus_state(p);
    const double h = 2e-3;
    const size_t steps = static_cast<size_t>(std::ceil(p.gate_time() / h));
    auto grid = linspace(0, p.gate_time(), steps + 1);
    auto traj = lb::evolve_lindblad(model, st, grid, lb::Scheme::Order2,
                                    pu::CompressionBudget::uniform(1e-8), {});
    if (!traj.completed) {
      ck.item("run completed at |alpha|^2=" + std::to_string(a2), 0, "==", 1, false);
      continue;
    }
    const double pz = models::z_gate_error(p, traj.final_state);
    const double expect = M_PI / (40.0 * std::pow(a2, 1.5));
    ck.require_between("p_Z at |alpha|^2=" + std::to_string(a2) + " (expect " +
                           std::to_string(expect) + ")",
                       pz, 0.7 * expect, 1.3 * expect);
    ck.item("p_Z decreases with the cat size", pz, "<", prev_pz, pz < prev_pz);
    prev_pz = pz;
    // bond-dimension plateau: max chi_q bounded by twice the median
    std::vector<size_t> chis;
    for (const auto& rec : traj.records) chis.push_back(rec.chi_q);
    std::sort(chis.begin(), chis.end());
    const double median = double(chis[chis.size() / 2]);
    const double mx = double(chis.back());
    ck.item("chi_q plateau at |alpha|^2=" + std::to_string(a2), mx, "<=", 2.0 * median,
            mx <= 2.0 * median);
  }
  return {7, "cat-qubit Z gate error scaling", ck.pass, ck.out.str(), 0};
}

CriterionResult c8_dephasing_monotonicity() {
  Check ck;
  // element count at fixed tolerance across kappa_phi / kappa_2, with
  // kappa_2 = 4 g2^2 / kappa_b the engineered two-photon rate
  models::CatParams base;
  base.epsilon_d = 2.0;
  base.bits_a = 4;
  base.bits_b = 3;
  const double kappa2 = 4.0 * base.g2 * base.g2 / base.kappa_b;
  std::vector<double> counts;
  for (double ratio : {0.1, 1.0, 10.0}) {
    models::CatParams p = base;
    p.kappa_phi = ratio * kappa2;
    auto model = models::cat_model(p);
    auto st = models::cat_plus_state(p);
    const double h = 2e-3, t_final = 1.0;
    auto grid = linspace(0, t_final, size_t(t_final / h) + 1);
    auto traj = lb::evolve_lindblad(model, st, grid, lb::Scheme::Order2,
                                    pu::CompressionBudget::uniform(1e-8), {});
    if (!traj.completed) {
      ck.item("run completed at ratio " + std::to_string(ratio), 0, "==", 1, false);
      counts.push_back(0);
      continue;
    }
    counts.push_back(double(traj.records.back().elements));
    ck.note("kappa_phi/kappa_2 = " + std::to_string(ratio) +
            ": elements = " + std::to_string(traj.records.back().elements) +
            ", chi_mu = " + std::to_string(traj.records.back().chi_mu));
  }
  for (size_t i = 0; i + 1 < counts.size(); ++i)
    ck.item("monotone element count step " + std::to_string(i), counts[i], "<=", counts[i + 1],
            counts[i] <= counts[i + 1]);
  return {8, "dephasing reduces compressibility monotonically", ck.pass, ck.out.str(), 0};
}

CriterionResult c9_transmon_spectrum() {
  Check ck;
  models::TransmonParams p;
  auto m = models::transmon_cavity_model(p);
  const double w01 = m.basis.omega01_ghz();
  ck.item("epsilon_1 - epsilon_0 [GHz] within 1 MHz of 5.320", w01, "~", 5.320,
          std::abs(w01 - 5.320) < 1e-3);
  const double formula = std::sqrt(8.0 * p.ec * p.ej_over_ec * p.ec) - p.ec;
  ck.note("exact diagonalization gives " + std::to_string(w01) +
          " GHz; the quoted 5.320 GHz equals the asymptotic estimate sqrt(8 Ec Ej) - Ec = " +
          std::to_string(formula) + " GHz, which sits 16.3 MHz above the true gap");
  ck.item("dressed drive frequency [GHz] within 1 MHz of 7.522", m.omega_d_ghz, "~", 7.522,
          std::abs(m.omega_d_ghz - 7.522) < 1e-3);
  return {9, "transmon spectrum and dressed drive frequency", ck.pass, ck.out.str(), 0};
}

CriterionResult c10_ionization() {
  Check ck;
  // branch table at paper parameters, reduced register sizes
  {
    models::TransmonParams p;
    p.bits_t = 4;
    p.bits_c = 7;
    auto basis = models::transmon_eigenbasis(p);
    auto d = models::dense_transmon_cavity(p, basis, p.bits_c);
    auto table = models::branch_analysis(d.h0, d.num_t, d.num_c, d.a_dag, d.dim_t, d.dim_c);
    auto max_jump = [&](size_t it, double nc_cap) {
      double jump = 0;
      for (size_t ic = 0; ic + 1 < d.dim_c; ++ic) {
        const auto& a = table.at(it, ic);
        const auto& b = table.at(it, ic + 1);
        if (b.n_c > nc_cap) break;
        jump = std::max(jump, b.n_t - a.n_t);
      }
      return jump;
    };
    const double j0 = max_jump(0, 80.0);
    const double j1 = max_jump(1, 80.0);
    const double j2 = max_jump(2, 80.0);
    ck.item("ground branch stays flat (max step in N_t)", j0, "<", 1.0, j0 < 1.0);
    ck.item("first excited branch crosses (max step in N_t)", j1, ">", 2.0, j1 > 2.0);
    ck.item("second excited branch crosses (max step in N_t)", j2, ">", 2.0, j2 > 2.0);
  }
  // ionization signature at a frequency-scaled parameter set: all circuit
  // frequencies divided by 50 (identical branch structure), cavity decay
  // kept 10x stronger relatively and a reduced drive, so the lab-frame
  // explicit stepping fits a desk budget
  {
    models::TransmonParams p;
    p.ec = 0.280 / 50.0;
    p.omega_r = 7.5 / 50.0;
    p.g = 0.250 / 50.0;
    p.kappa = 0.004;
    p.epsilon_d = 0.012;
    p.bits_t = 4;
    p.bits_c = 7;
    auto m = models::transmon_cavity_model(p);
    MPO num_t = pu::chain_operator(m.model.layout, {{0, m.basis.number_op}});
    MPO num_c = pu::chain_operator(m.model.layout, {{1, q::number_mpo(p.bits_c)}});
    const double t_final = 80.0;  // ~2 cavity lifetimes
    const double h = 5e-3;
    auto grid = linspace(0, t_final, size_t(t_final / h) + 1);
    const auto budget = pu::CompressionBudget::uniform(1e-8);

    auto run = [&](size_t it) {
      auto st = models::dressed_initial_state(m, it);
      return lb::evolve_lindblad(m.model, st, grid, lb::Scheme::Order2, budget,
                                 {{"n_t", num_t}, {"n_c", num_c}});
    };
    auto t0 = run(0);
    auto t1 = run(1);
    if (!t0.completed || !t1.completed) {
      ck.item("dynamics completed", 0, "==", 1, false);
      ck.note("failure: " + t0.failure + " " + t1.failure);
    } else {
      double drop0 = 0, drop1 = 0;
      size_t mu0 = 1, mu1 = 1;
      double purity_at_mu_rise = 1.0;
      bool mu_rose_with_purity_drop = false;
      for (size_t i = 0; i < t0.records.size(); ++i) {
        drop0 = std::max(drop0, 1.0 - t0.records[i].purity);
        drop1 = std::max(drop1, 1.0 - t1.records[i].purity);
        mu0 = std::max(mu0, t0.records[i].chi_mu);
        if (t1.records[i].chi_mu > mu1) {
          mu1 = t1.records[i].chi_mu;
          purity_at_mu_rise = t1.records[i].purity;
        }
      }
      mu_rose_with_purity_drop = (mu1 > 2) && (purity_at_mu_rise < 0.99);
      ck.item("excited-state purity drop / ground-state purity drop", drop1 / std::max(drop0, 1e-12),
              ">=", 2.0, drop1 >= 2.0 * drop0);
      ck.item("chi_mu grows when purity drops (max chi_mu)", double(mu1), ">", 2.0,
              mu_rose_with_purity_drop);
      ck.note("ground run: max purity drop " + std::to_string(drop0) + ", chi_mu " +
              std::to_string(mu0) + "; excited run: drop " + std::to_string(drop1) +
              ", chi_mu " + std::to_string(mu1) + ", N_c(final) " +
              std::to_string(t1.observables["n_c"].back().real()));
    }
  }
  return {10, "branch crossings and the ionization signature", ck.pass, ck.out.str(), 0};
}

CriterionResult c11_structural() {
  Check ck;
  pu::ModeLayout layout{{{3, pu::BasisTag::Fock}, {2, pu::BasisTag::Fock}}};
  const auto budget = pu::CompressionBudget::uniform(1e-10);

  TensorTrain m1 = q::coherent_state_qtt(1.0, 3, 1e-12);
  TensorTrain m2 = q::fock_state(0, 3);
  auto p1 = pu::from_pure_product({m1, q::fock_state(0, 2)}, layout);
  auto p2 = pu::from_pure_product({m2, q::fock_state(1, 2)}, layout);
  auto p3 = pu::from_pure_product({m2, q::fock_state(0, 2)}, layout);  // overlaps p1

  // positivity through a mixed pipeline
  MPO na = pu::chain_operator(layout, {{0, q::number_mpo(3)}});
  auto s = pu::matrix_add(p1, p2, budget);
  s = pu::apply_operator(na, s, budget);
  s = pu::matrix_add(s, p3, budget);
  s = pu::truncate_purity(s, pu::CompressionBudget::uniform(1e-4));
  s.renormalize();
  Eigen::SelfAdjointEigenSolver<dense::MatrixXcd> es(pu::dense_rho(s));
  ck.item("min eigenvalue of the reconstructed rho", es.eigenvalues().minCoeff(), ">=", -1e-12,
          es.eigenvalues().minCoeff() >= -1e-12);
  ck.require("post-renormalization |trace - 1|", std::abs(s.trace() - 1.0), 1e-12);
  const double purity = s.purity();
  ck.item("purity in (0, 1 + 1e-10]", purity, "<=", 1.0 + 1e-10,
          purity > 0.0 && purity <= 1.0 + 1e-10);

  // vector vs matrix addition on overlapping inputs
  auto vsum = pu::vector_add(p1, p3, budget);
  auto msum = pu::matrix_add(p1, p3, budget);
  auto rho_ref = (pu::dense_rho(p1) + pu::dense_rho(p3)).eval();
  const double m_err = (pu::dense_rho(msum) - rho_ref).cwiseAbs().maxCoeff();
  const double v_err = (pu::dense_rho(vsum) - rho_ref).cwiseAbs().maxCoeff();
  ck.require("matrix addition dense equivalence", m_err, 1e-10);
  ck.item("(Psi1+Psi2)(Psi1+Psi2)^dag differs from rho1+rho2", v_err, ">", 1e-3, v_err > 1e-3);
  return {11, "structural invariants of the purified representation", ck.pass, ck.out.str(), 0};
}

}  // namespace

CriterionResult run_criterion(int id) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = c1_table_ranks(); break;
    case 2: r = c2_error_decay(); break;
    case 3: r = c3_integrator_orders(); break;
    case 4: r = c4_semiclassical(); break;
    case 5: r = c5_lindblad_oracle(); break;
    case 6: r = c6_amplitude_damping(); break;
    case 7: r = c7_cat_z_gate(); break;
    case 8: r = c8_dephasing_monotonicity(); break;
    case 9: r = c9_transmon_spectrum(); break;
    case 10: r = c10_ionization(); break;
    case 11: r = c11_structural(); break;
    default: throw std::invalid_argument("unknown criterion id");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "operators") return {1, 2};
  if (suite == "integrators") return {3, 4};
  if (suite == "lindblad") return {5, 6, 11};
  if (suite == "cat") return {7, 8};
  if (suite == "transmon") return {9, 10};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  throw std::invalid_argument("unknown suite: " + suite);
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << r.id << ": " << r.name << " ("
     << r.seconds << " s)\n"
     << r.details;
  return os.str();
}

}  // namespace qtt::verify
