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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qtt/models.hpp"
#include "qtt/oracle.hpp"
#include "qtt/quantics.hpp"

using namespace qtt;
namespace pu = qtt::purified;
namespace lb = qtt::lindblad;
namespace q = qtt::quantics;

namespace {

std::vector<double> linspace(double a, double b, size_t n) {
  std::vector<double> t(n);
  for (size_t i = 0; i < n; ++i) t[i] = a + (b - a) * double(i) / double(n - 1);
  return t;
}

}  // namespace

TEST_CASE("cat parameter bookkeeping") {
  models::CatParams p;  // paper Z-gate set: g2=1, kb=10 g2, eps_z = 0.4 g2^2/kb
  CHECK(p.alpha() == -2.0);
  CHECK(std::abs(p.gate_time() - M_PI / (4.0 * 2.0 * 0.04)) < 1e-12);
  // predicted p_Z = pi / (40 |alpha|^3) when kappa_a = 0
  CHECK(std::abs(p.predicted_pz() - M_PI / (40.0 * 8.0)) < 1e-12);
}

TEST_CASE("cat hamiltonian matches the elementwise dense assembly") {
  models::CatParams p;
  p.epsilon_d = 2.0;  // |alpha|^2 = 2 fits a 4-bit register
  p.bits_a = 4;
  p.bits_b = 3;
  auto model = models::cat_model(p);
  auto h = oracle::mpo_to_dense(model.h0);

  const size_t na = 16, nb = 8, dim = na * nb;
  dense::MatrixXcd a = dense::MatrixXcd::Zero(na, na), b = dense::MatrixXcd::Zero(nb, nb);
  for (size_t i = 0; i + 1 < na; ++i) a(i, i + 1) = std::sqrt(double(i + 1));
  for (size_t i = 0; i + 1 < nb; ++i) b(i, i + 1) = std::sqrt(double(i + 1));
  auto kron = [&](const dense::MatrixXcd& x, const dense::MatrixXcd& y) {
    dense::MatrixXcd out(dim, dim);
    for (size_t i = 0; i < na; ++i)
      for (size_t j = 0; j < na; ++j)
        out.block(i * nb, j * nb, nb, nb) = x(i, j) * y;
    return out;
  };
  const dense::MatrixXcd ia = dense::MatrixXcd::Identity(na, na);
  const dense::MatrixXcd ib = dense::MatrixXcd::Identity(nb, nb);
  dense::MatrixXcd a2 = a * a;
  dense::MatrixXcd ref = p.g2 * (kron(a2.adjoint(), b) + kron(a2, b.adjoint())) -
                         p.epsilon_d * kron(ia, b + b.adjoint()) +
                         p.epsilon_z * kron(a + a.adjoint(), ib);
  CHECK((h - ref).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
  // jump scaling
  auto lb_dense = oracle::mpo_to_dense(model.jumps[0]);
  CHECK((lb_dense - std::sqrt(p.kappa_b) * kron(ia, b)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("cat model rejects undersized memory registers") {
  models::CatParams p;
  p.epsilon_d = 8.0;  // |alpha|^2 = 8 needs 2^bits_a >= 24
  p.bits_a = 4;
  CHECK_THROWS_AS(models::cat_model(p), DimensionError);
}

TEST_CASE("stabilized coherent state stays put without the gate drive") {
  // the stabilization statement holds in the adiabatic regime
  // 8 |alpha| g2 << kappa_b, so run there
  models::CatParams p;
  p.g2 = 0.2;
  p.epsilon_d = 0.4;  // alpha = -sqrt(2)
  p.epsilon_z = 0.0;
  p.bits_a = 3;
  p.bits_b = 3;
  REQUIRE(p.adiabaticity() < 0.5);
  auto model = models::cat_model(p);
  auto st = models::cat_coherent_state(p, +1);
  MPO a_chain = pu::chain_operator(model.layout, {{0, q::annihilation_mpo(p.bits_a, 1e-12)}});
  const double t_final = 5.0 / p.kappa_b;
  auto grid = linspace(0, t_final, 251);
  auto traj = lb::evolve_lindblad(model, st, grid, lb::Scheme::Order2,
                                  pu::CompressionBudget::uniform(1e-9), {{"a", a_chain}});
  REQUIRE(traj.completed);
  const cplx alpha0 = traj.observables["a"].front();
  CHECK(std::abs(alpha0 - p.alpha()) < 1e-2 * std::abs(p.alpha()));
  for (const auto& v : traj.observables["a"]) CHECK(std::abs(v - alpha0) < 1e-3);
}

TEST_CASE("z gate error estimator on exact cat states") {
  models::CatParams p;
  p.epsilon_d = 2.0;
  p.bits_a = 4;
  p.bits_b = 2;
  // theta = 0: the target is the initial even cat itself
  models::CatParams p0 = p;
  p0.theta = 0.0;
  auto plus = models::cat_plus_state(p0);
  CHECK(models::z_gate_error(p0, plus) < 1e-9);
  // theta = pi: the odd cat is orthogonal to the even cat
  models::CatParams ppi = p;
  ppi.theta = M_PI;
  CHECK(models::z_gate_error(ppi, plus) > 0.99);
}

TEST_CASE("transmon spectrum against the asymptotic formula and the paper quote") {
  models::TransmonParams p;
  auto basis = models::transmon_eigenbasis(p);
  // the exact charge-basis spectrum, cross-checked against an independent
  // phase-grid discretization, sits 16.3 MHz below the asymptotic formula
  CHECK(std::abs(basis.omega01_ghz() - 5.30374) < 2e-4);
  const double formula = std::sqrt(8.0 * p.ec * p.ej_over_ec * p.ec) - p.ec;
  CHECK(std::abs(formula - 5.320) < 1e-6);
  CHECK(basis.omega01_ghz() < formula);
}

TEST_CASE("eigenbasis charge operator obeys the parity selection rule") {
  models::TransmonParams p;
  p.bits_t = 4;
  auto basis = models::transmon_eigenbasis(p);
  auto nt = oracle::mpo_to_dense(basis.n_t);
  for (Eigen::Index a = 0; a < nt.rows(); ++a) CHECK(std::abs(nt(a, a)) < 1e-10);
}

TEST_CASE("eigenbasis charge operator matches the dense matrix elements") {
  models::TransmonParams p;
  p.bits_t = 4;
  auto basis = models::transmon_eigenbasis(p, 1e-10);
  Eigen::MatrixXd w = basis.vectors;
  for (int i = 0; i < w.rows(); ++i) w.row(i) *= double(i - p.charge_cutoff);
  Eigen::MatrixXd nmat = basis.vectors.transpose() * w;
  auto nt = oracle::mpo_to_dense(basis.n_t);
  CHECK((nt - nmat.cast<cplx>()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(basis.n_t.max_bond() <= 10);  // in-well register
  CHECK(basis.h_t.max_bond() <= 10);
  auto ht = oracle::mpo_to_dense(basis.h_t);
  for (Eigen::Index a = 0; a < 16; ++a)
    CHECK(std::abs(ht(a, a).real() - basis.energies[a]) < 1e-7 * (1.0 + basis.energies[a]));
}

TEST_CASE("above-well states push the charge operator to its intrinsic rank") {
  // with 32 kept states the operator genuinely needs rank ~16 at 1e-10;
  // the dense SVD oracle agrees, so TCI is not overshooting
  models::TransmonParams p;
  p.bits_t = 5;
  auto basis = models::transmon_eigenbasis(p, 1e-10);
  Eigen::MatrixXd w = basis.vectors;
  for (int i = 0; i < w.rows(); ++i) w.row(i) *= double(i - p.charge_cutoff);
  Eigen::MatrixXd nmat = basis.vectors.transpose() * w;
  std::vector<cplx> flat(32 * 32);
  for (size_t r = 0; r < 32; ++r)
    for (size_t c = 0; c < 32; ++c) flat[r * 32 + c] = nmat(r, c);
  MPO optimal = mpo_from_dense(flat, std::vector<size_t>(5, 2), std::vector<size_t>(5, 2),
                               {1e-10, 0});
  CHECK(basis.n_t.max_bond() <= optimal.max_bond() + 2);
  CHECK(basis.n_t.max_bond() <= 18);
}

TEST_CASE("dressed drive frequency reproduces the paper value") {
  models::TransmonParams p;
  auto m = models::transmon_cavity_model(p);
  CHECK(std::abs(m.omega_d_ghz - 7.522) < 1e-3);
}

TEST_CASE("transmon-cavity hamiltonian matches the dense assembly") {
  models::TransmonParams p;
  p.bits_t = 3;
  p.bits_c = 4;
  auto m = models::transmon_cavity_model(p);
  auto d = models::dense_transmon_cavity(p, m.basis, p.bits_c);
  auto h0 = oracle::mpo_to_dense(m.model.h0);
  CHECK((h0 - d.h0).cwiseAbs().maxCoeff() < 1e-6 * d.h0.cwiseAbs().maxCoeff());
  CHECK((h0 - h0.adjoint()).cwiseAbs().maxCoeff() < 1e-7);
  // drive quadrature
  auto h1 = oracle::mpo_to_dense(*m.model.h1);
  CHECK((h1 - h1.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
  const double wd = m.omega_d_ghz * 2.0 * M_PI;
  const double f = m.model.f(0.013);
  CHECK(std::abs(f - 2.0 * M_PI * p.epsilon_d * std::sin(wd * 0.013)) < 1e-12);
}

TEST_CASE("branch analysis labels the decoupled system exactly") {
  models::TransmonParams p;
  p.g = 0.0;
  p.bits_t = 3;
  p.bits_c = 3;
  auto basis = models::transmon_eigenbasis(p);
  auto d = models::dense_transmon_cavity(p, basis, p.bits_c);
  auto table = models::branch_analysis(d.h0, d.num_t, d.num_c, d.a_dag, d.dim_t, d.dim_c);
  REQUIRE(table.entries.size() == d.dim_t * d.dim_c);
  for (const auto& e : table.entries) {
    CHECK(std::abs(e.n_t - double(e.i_t)) < 1e-9);
    CHECK(std::abs(e.n_c - double(e.i_c)) < 1e-9);
    CHECK(!e.ill_defined);
  }
}

TEST_CASE("branch analysis is deterministic and bijective with coupling") {
  models::TransmonParams p;
  p.bits_t = 3;
  p.bits_c = 5;
  auto basis = models::transmon_eigenbasis(p);
  auto d = models::dense_transmon_cavity(p, basis, p.bits_c);
  auto t1 = models::branch_analysis(d.h0, d.num_t, d.num_c, d.a_dag, d.dim_t, d.dim_c);
  auto t2 = models::branch_analysis(d.h0, d.num_t, d.num_c, d.a_dag, d.dim_t, d.dim_c);
  REQUIRE(t1.entries.size() == t2.entries.size());
  std::vector<bool> seen(d.dim_t * d.dim_c, false);
  for (size_t i = 0; i < t1.entries.size(); ++i) {
    CHECK(t1.entries[i].eigen_index == t2.entries[i].eigen_index);
    CHECK(!seen[t1.entries[i].eigen_index]);
    seen[t1.entries[i].eigen_index] = true;
  }
  // cavity population grows monotonically along each branch at low i_c
  for (size_t it = 0; it < d.dim_t; ++it)
    for (size_t ic = 0; ic + 1 < 8; ++ic)
      CHECK(t1.at(it, ic + 1).n_c > t1.at(it, ic).n_c);
}

TEST_CASE("dressed initial states are near the bare products at weak coupling") {
  models::TransmonParams p;
  p.g = 0.025;  // ten times weaker than the paper coupling
  p.bits_t = 3;
  p.bits_c = 4;
  auto m = models::transmon_cavity_model(p);
  auto st = models::dressed_initial_state(m, 1);
  CHECK(std::abs(st.trace() - 1.0) < 1e-10);
  CHECK(std::abs(st.purity() - 1.0) < 1e-10);
  MPO bnum = pu::chain_operator(m.model.layout, {{0, m.basis.number_op}});
  const double nt = (pu::expectation(st, bnum) / st.trace()).real();
  CHECK(std::abs(nt - 1.0) < 0.05);
}
