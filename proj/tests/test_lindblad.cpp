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

#include "qtt/lindblad.hpp"
#include "qtt/oracle.hpp"
#include "qtt/quantics.hpp"

using namespace qtt;
namespace pu = qtt::purified;
namespace lb = qtt::lindblad;
namespace q = qtt::quantics;

namespace {

const pu::CompressionBudget kBudget = pu::CompressionBudget::uniform(1e-10);

std::vector<double> linspace(double a, double b, size_t n) {
  std::vector<double> t(n);
  for (size_t i = 0; i < n; ++i) t[i] = a + (b - a) * double(i) / double(n - 1);
  return t;
}

/// single damped mode: L = sqrt(kappa) a, H = 0
lb::LindbladModel damped_mode(size_t bits, double kappa) {
  pu::ModeLayout layout{{{bits, pu::BasisTag::Fock}}};
  MPO h0 = pu::chain_operator(layout, {{0, q::number_mpo(bits)}});
  mpo_scale(h0, 0.0);
  MPO l = pu::chain_operator(layout, {{0, q::annihilation_mpo(bits, 1e-12)}});
  mpo_scale(l, std::sqrt(kappa));
  return lb::LindbladModel::make(layout, std::move(h0), {}, {}, {std::move(l)});
}

pu::PurifiedDensityMatrix one_mode_state(const TensorTrain& tt) {
  pu::ModeLayout layout{{{tt.num_sites(), pu::BasisTag::Fock}}};
  return pu::from_pure_product({tt}, layout);
}

}  // namespace

TEST_CASE("identity kraus map leaves the state alone") {
  auto st = one_mode_state(q::coherent_state_qtt(1.0, 4, 1e-12));
  lb::KrausMap map;
  map.operators.push_back({lb::OperatorTerm{1.0, pu::chain_operator(st.layout, {})}});
  auto out = lb::apply_kraus(map, st, kBudget);
  CHECK((pu::dense_rho(out) - pu::dense_rho(st)).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("complete dephasing halves the purity of a superposition") {
  // {|0><0|, |1><1|} on (|0> + |1>)/sqrt(2), single 1-bit mode
  pu::ModeLayout layout{{{1, pu::BasisTag::Fock}}};
  TensorTrain plus = product_state({{std::sqrt(0.5), std::sqrt(0.5)}});
  auto st = pu::from_pure_product({plus}, layout);
  auto proj = [&](size_t level) {
    MPO p = identity_mpo({2});
    p.cores[0].at(0, 1 - level, 1 - level, 0) = 0.0;
    return pu::chain_operator(layout, {{0, p}});
  };
  lb::KrausMap map;
  map.operators.push_back({lb::OperatorTerm{1.0, proj(0)}});
  map.operators.push_back({lb::OperatorTerm{1.0, proj(1)}});
  auto out = lb::apply_kraus(map, st, kBudget);
  CHECK(std::abs(out.purity() - 0.5) < 1e-12);
  CHECK(std::abs(out.trace() - 1.0) < 1e-12);
}

TEST_CASE("kraus map matches the dense channel") {
  // {sqrt(1-p) 1, sqrt(p) a} on a coherent state
  const size_t bits = 4;
  const double pr = 0.3;
  auto st = one_mode_state(q::coherent_state_qtt(1.2, bits, 1e-12));
  MPO id_chain = pu::chain_operator(st.layout, {});
  MPO a_chain = pu::chain_operator(st.layout, {{0, q::annihilation_mpo(bits, 1e-12)}});
  lb::KrausMap map;
  map.operators.push_back({lb::OperatorTerm{std::sqrt(1.0 - pr), id_chain}});
  map.operators.push_back({lb::OperatorTerm{std::sqrt(pr), a_chain}});
  auto out = lb::apply_kraus(map, st, kBudget);

  auto rho = pu::dense_rho(st);
  const size_t dim = 16;
  dense::MatrixXcd a = dense::MatrixXcd::Zero(dim, dim);
  for (size_t i = 0; i + 1 < dim; ++i) a(i, i + 1) = std::sqrt(double(i + 1));
  auto ref = ((1.0 - pr) * rho + pr * a * rho * a.adjoint()).eval();
  CHECK((pu::dense_rho(out) - ref).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("a kraus operator given as a sum expands through vector addition") {
  // A = (n + 2) applied as the sum of two terms
  const size_t bits = 3;
  auto st = one_mode_state(q::coherent_state_qtt(0.8, bits, 1e-12));
  MPO id_chain = pu::chain_operator(st.layout, {});
  MPO n_chain = pu::chain_operator(st.layout, {{0, q::number_mpo(bits)}});
  lb::KrausMap map;
  map.operators.push_back(
      {lb::OperatorTerm{1.0, n_chain}, lb::OperatorTerm{2.0, id_chain}});
  auto out = lb::apply_kraus(map, st, kBudget);
  auto rho = pu::dense_rho(st);
  dense::MatrixXcd op = dense::MatrixXcd::Zero(8, 8);
  for (size_t i = 0; i < 8; ++i) op(i, i) = double(i) + 2.0;
  auto ref = (op * rho * op.adjoint()).eval();
  CHECK((pu::dense_rho(out) - ref).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("first order step with no jumps and no hamiltonian is the identity") {
  pu::ModeLayout layout{{{3, pu::BasisTag::Fock}}};
  MPO h0 = pu::chain_operator(layout, {{0, q::number_mpo(3)}});
  mpo_scale(h0, 0.0);
  auto model = lb::LindbladModel::make(layout, std::move(h0), {}, {}, {});
  auto st = one_mode_state(q::coherent_state_qtt(0.7, 3, 1e-12));
  double trace_pre = 0;
  auto out = lb::first_order_step(model, st, 0.0, 0.01, kBudget, &trace_pre);
  CHECK(std::abs(trace_pre - 1.0) < 1e-10);
  CHECK((pu::dense_rho(out) - pu::dense_rho(st)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("amplitude damping decays the occupation exponentially") {
  const size_t bits = 3;
  const double kappa = 1.0, dt = 1e-3;
  auto model = damped_mode(bits, kappa);
  auto st = one_mode_state(q::fock_state(1, bits));
  MPO n_chain = pu::chain_operator(st.layout, {{0, q::number_mpo(bits)}});
  auto grid = linspace(0, 1.0, 101);  // output every 10 steps of dt
  // integrate manually at fine dt, record at grid times
  double worst = 0;
  pu::PurifiedDensityMatrix state = st;
  double t = 0;
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    while (t < grid[i + 1] - dt / 2) {
      state = lb::first_order_step(model, state, t, dt, kBudget);
      t += dt;
    }
    const double n = (pu::expectation(state, n_chain) / state.trace()).real();
    worst = std::max(worst, std::abs(n - std::exp(-kappa * t)));
  }
  CHECK(worst < 2e-3);  // O(dt) global error at dt = 1e-3
}

TEST_CASE("first order pre-normalization trace is 1 + O(dt^2)") {
  auto model = damped_mode(3, 1.0);
  auto st = one_mode_state(q::fock_state(1, 3));
  double c_prev = 0;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    double trace_pre = 0;
    lb::first_order_step(model, st, 0.0, dt, kBudget, &trace_pre);
    const double c = std::abs(trace_pre - 1.0) / (dt * dt);
    if (c_prev > 0) CHECK(c < 4.0 * c_prev + 1.0);
    c_prev = c;
  }
}

TEST_CASE("second order scheme converges at slope two on amplitude damping") {
  const size_t bits = 3;
  const double kappa = 1.0, t_final = 0.5;
  auto model = damped_mode(bits, kappa);
  auto st = one_mode_state(q::fock_state(1, bits));
  MPO n_chain = pu::chain_operator(st.layout, {{0, q::number_mpo(bits)}});
  std::vector<double> errs;
  for (int steps : {25, 50, 100}) {
    auto traj = lb::evolve_lindblad(model, st, linspace(0, t_final, steps + 1),
                                    lb::Scheme::Order2, kBudget, {{"n", n_chain}});
    REQUIRE(traj.completed);
    const double n = traj.observables["n"].back().real();
    errs.push_back(std::abs(n - std::exp(-kappa * t_final)));
  }
  const double slope = std::log2(errs[0] / errs[2]) / 2.0;
  CHECK(slope > 1.5);
  CHECK(slope < 2.5);
}

TEST_CASE("one tiny second-order step approaches the identity") {
  auto model = damped_mode(3, 1.0);
  auto st = one_mode_state(q::coherent_state_qtt(0.6, 3, 1e-12));
  auto out = lb::second_order_step(model, st, 0.0, 1e-7, kBudget);
  CHECK((pu::dense_rho(out) - pu::dense_rho(st)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("two-mode model with jumps tracks the dense lindblad oracle") {
  // two 3-bit modes, an exchange coupling, damping on both
  pu::ModeLayout layout{{{3, pu::BasisTag::Fock}, {3, pu::BasisTag::Fock}}};
  MPO a_op = q::annihilation_mpo(3, 1e-12);
  MPO adag = mpo_adjoint(a_op);
  const double g = 0.7, ka = 0.4, kb = 0.9;
  MPO h0 = pu::chain_operator(layout, {{0, adag}, {1, a_op}});
  {
    MPO t = pu::chain_operator(layout, {{0, a_op}, {1, adag}});
    h0 = mpo_add(h0, t, {1e-13, 0});
    mpo_scale(h0, g);
  }
  MPO la = pu::chain_operator(layout, {{0, a_op}});
  mpo_scale(la, std::sqrt(ka));
  MPO lb_op = pu::chain_operator(layout, {{1, a_op}});
  mpo_scale(lb_op, std::sqrt(kb));
  auto model = lb::LindbladModel::make(layout, h0, {}, {}, {la, lb_op});

  auto st = pu::from_pure_product({q::fock_state(2, 3), q::fock_state(0, 3)}, layout);
  auto budget = pu::CompressionBudget::uniform(1e-8);
  auto grid = linspace(0, 0.5, 126);  // dt = 4e-3
  auto traj = lb::evolve_lindblad(model, st, grid, lb::Scheme::Order2, budget, {});
  REQUIRE(traj.completed);

  oracle::DenseLindbladModel ref;
  auto h0d = oracle::mpo_to_dense(h0);
  ref.h = [&](double) { return h0d; };
  ref.jumps = {oracle::mpo_to_dense(la), oracle::mpo_to_dense(lb_op)};
  auto rho_traj = oracle::dense_lindblad(ref, pu::dense_rho(st), grid, 40);
  const double dist = oracle::trace_distance(pu::dense_rho(traj.final_state), rho_traj.back());
  CHECK(dist < 1e-5);

  // purity never exceeds one and positivity is preserved
  for (const auto& rec : traj.records) CHECK(rec.purity <= 1.0 + 1e-10);
  Eigen::SelfAdjointEigenSolver<dense::MatrixXcd> es(pu::dense_rho(traj.final_state));
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("closed-system limit matches a pure schrodinger evolution") {
  pu::ModeLayout layout{{{4, pu::BasisTag::Fock}}};
  MPO h0 = pu::chain_operator(layout, {{0, q::number_mpo(4)}});
  auto model = lb::LindbladModel::make(layout, h0, {}, {}, {});
  auto st = one_mode_state(q::coherent_state_qtt(1.2, 4, 1e-12));
  auto grid = linspace(0, 0.5, 501);
  MPO n_chain = pu::chain_operator(layout, {{0, q::number_mpo(4)}});
  auto traj = lb::evolve_lindblad(model, st, grid, lb::Scheme::Order2, kBudget,
                                  {{"n", n_chain}});
  REQUIRE(traj.completed);
  for (const auto& rec : traj.records) CHECK(std::abs(rec.purity - 1.0) < 1e-8);
  // diagonal Hamiltonian: occupation stays put
  // the Taylor propagator distorts relative weights at O((E dt)^4) per step
  CHECK(std::abs(traj.observables["n"].back().real() -
                 traj.observables["n"].front().real()) < 1e-5);
}

TEST_CASE("step failure leaves a flagged partial trajectory") {
  auto model = damped_mode(3, 1.0);
  auto st = one_mode_state(q::fock_state(1, 3));
  scale(st.psi, 0.0);  // trace collapses immediately
  auto traj = lb::evolve_lindblad(model, st, linspace(0, 0.1, 11), lb::Scheme::Order1,
                                  kBudget, {});
  CHECK(!traj.completed);
  CHECK(!traj.failure.empty());
}
