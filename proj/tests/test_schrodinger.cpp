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
#include "qtt/schrodinger.hpp"

using namespace qtt;
namespace q = qtt::quantics;
namespace sch = qtt::schrodinger;

namespace {

std::vector<double> linspace(double a, double b, size_t n) {
  std::vector<double> t(n);
  for (size_t i = 0; i < n; ++i) t[i] = a + (b - a) * double(i) / double(n - 1);
  return t;
}

sch::TimeDependentHamiltonian number_hamiltonian(size_t bits, double omega) {
  MPO h0 = q::number_mpo(bits);
  mpo_scale(h0, omega);
  return sch::TimeDependentHamiltonian::make(std::move(h0));
}

}  // namespace

TEST_CASE("rk4 evolves a number eigenstate by the exact phase") {
  const double omega = 1.0, dt = 0.01;
  auto h = number_hamiltonian(4, omega);
  TensorTrain psi = q::fock_state(3, 4);
  TensorTrain out = sch::rk4_step(h, psi, 0.0, dt, {1e-12, 0});
  const cplx amp = inner(q::fock_state(3, 4), out);
  const cplx expect = std::exp(cplx(0, -3.0 * omega * dt));
  CHECK(std::abs(amp - expect) < 10 * std::pow(dt, 5));
  CHECK(std::abs(out.norm() - 1.0) < 1e-10);
}

TEST_CASE("rk4 rotates a free coherent state rigidly") {
  const size_t bits = 5;
  const double omega = 1.0;
  auto h = number_hamiltonian(bits, omega);
  TensorTrain psi = q::coherent_state_qtt(2.0, bits, 1e-12);
  MPO a_op = q::annihilation_mpo(bits, 1e-12);
  auto grid = linspace(0, 0.3, 101);
  auto traj = sch::evolve(h, psi, grid, sch::Method::Rk4, {1e-12, 0}, {{"a", a_op}});
  for (size_t i = 0; i < grid.size(); i += 20) {
    const cplx expect = 2.0 * std::exp(cplx(0, -omega * grid[i]));
    CHECK(std::abs(traj.observables["a"][i] - expect) < 1e-8);
  }
}

TEST_CASE("rk4 aborts on a stiff step") {
  auto h = number_hamiltonian(6, 50.0);
  TensorTrain psi = q::coherent_state_qtt(3.0, 6, 1e-10);
  CHECK_THROWS_AS(sch::rk4_step(h, psi, 0.0, 0.5, {1e-10, 0}), ConvergenceError);
}

TEST_CASE("crank-nicolson with zero Hamiltonian is the identity") {
  MPO h0 = q::number_mpo(4);
  mpo_scale(h0, 0.0);
  auto h = sch::TimeDependentHamiltonian::make(std::move(h0));
  TensorTrain psi = q::coherent_state_qtt(1.0, 4, 1e-12);
  TensorTrain out = sch::crank_nicolson_step(h, psi, 0.0, 0.05, {1e-10, 0});
  CHECK(sch::overlap_error(psi, out) < 1e-10);
  CHECK(std::abs(out.norm() - 1.0) < 1e-9);
}

TEST_CASE("crank-nicolson phase matches the scalar taylor rational") {
  // eigenstate |3> of omega n: psi -> (1 - i E dt/2 - E^2 dt^2/8) /
  //                                   (1 + i E dt/2 - E^2 dt^2/8) psi
  const double omega = 1.0, dt = 0.02, energy = 3.0 * omega;
  auto h = number_hamiltonian(4, omega);
  TensorTrain psi = q::fock_state(3, 4);
  TensorTrain out = sch::crank_nicolson_step(h, psi, 0.0, dt, {1e-11, 0});
  const cplx num(1.0 - energy * energy * dt * dt / 8.0, -energy * dt / 2.0);
  const cplx den(1.0 - energy * energy * dt * dt / 8.0, energy * dt / 2.0);
  const cplx amp = inner(q::fock_state(3, 4), out);
  CHECK(std::abs(amp - num / den) < 1e-9);
}

TEST_CASE("crank-nicolson norm conservation over a long kerr run") {
  models::KerrParams p;
  p.bits = 6;
  p.alpha0 = 2.0;
  auto m = models::kerr_model(p);
  auto grid = linspace(0, 1.0, 201);
  auto traj = sch::evolve(m.h, m.psi0, grid, sch::Method::CrankNicolson, {1e-9, 0});
  for (const auto& s : traj.report.steps) CHECK(std::abs(s.norm - 1.0) < 1e-6);
}

TEST_CASE("magnus coefficients in the time-independent limit") {
  auto h = number_hamiltonian(3, 1.0);
  auto c = sch::magnus_average(h, 0.3, 0.05);
  CHECK(c.c_sum == 0.0);  // no drive term at all
  CHECK(std::abs(c.c_comm) == 0.0);
}

TEST_CASE("magnus coefficients for a linear drive") {
  MPO h0 = q::number_mpo(3);
  MPO h1 = q::number_mpo(3);
  auto h = sch::TimeDependentHamiltonian::make(std::move(h0), std::move(h1),
                                               [](double t) { return t; });
  auto c = sch::magnus_average(h, 0.0, 1.0);
  CHECK(std::abs(c.c_sum - 0.5) < 1e-14);                       // (f(t1)+f(t2))/2 = 1/2
  CHECK(std::abs(c.t2 - c.t1 - std::sqrt(3.0) / 3.0) < 1e-14);  // Gauss node gap
  // c_comm = i sqrt(3)/12 dt (f2 - f1) = i/12
  CHECK(std::abs(c.c_comm - cplx(0, 1.0 / 12.0)) < 1e-14);
}

TEST_CASE("magnus coefficients match direct drive evaluation on the kerr benchmark") {
  models::KerrParams p;
  p.bits = 4;
  p.alpha0 = 1.0;
  auto m = models::kerr_model(p);
  const double t = 0.3, dt = 0.01;
  auto c = sch::magnus_average(m.h, t, dt);
  const double t1 = t + (3.0 - std::sqrt(3.0)) / 6.0 * dt;
  const double t2 = t + (3.0 + std::sqrt(3.0)) / 6.0 * dt;
  CHECK(std::abs(c.c_sum - 0.5 * (p.f(t1) + p.f(t2))) < 1e-14);
  CHECK(std::abs(c.c_comm - cplx(0, 1) * std::sqrt(3.0) * dt / 12.0 * (p.f(t2) - p.f(t1))) <
        1e-16);
}

TEST_CASE("tdvp keeps a product eigenstate exact with unit bonds") {
  const double omega = 1.0, dt = 0.05;
  MPO h0 = q::number_mpo(4);
  mpo_scale(h0, omega);
  TensorTrain psi = q::fock_state(5, 4);
  TensorTrain out = sch::tdvp_step(h0, psi, dt);
  CHECK(out.max_bond() == 1);
  const cplx amp = inner(q::fock_state(5, 4), out);
  CHECK(std::abs(amp - std::exp(cplx(0, -5.0 * omega * dt))) < 1e-11);
  CHECK(std::abs(out.norm() - 1.0) < 1e-12);
}

TEST_CASE("tdvp against the dense propagator on the kerr system") {
  models::KerrParams p;
  p.bits = 6;
  p.alpha0 = 2.0;
  auto m = models::kerr_model(p);
  auto grid = linspace(0, 0.2, 201);  // dt = 1e-3
  auto traj = sch::evolve(m.h, m.psi0, grid, sch::Method::TdvpMagnus, {1e-10, 0});
  // dense reference at fine substeps
  auto h0d = oracle::mpo_to_dense(m.h.h0);
  auto h1d = oracle::mpo_to_dense(*m.h.h1);
  auto psi_ref = oracle::dense_schrodinger(
      [&](double t) { return (h0d + p.f(t) * h1d).eval(); }, oracle::tt_to_dense(m.psi0), grid,
      20);
  auto got = oracle::tt_to_dense(traj.final_state);
  const cplx ov = psi_ref.back().dot(got);
  CHECK(1.0 - std::abs(ov) / got.norm() < 1e-6);
  // norm conservation
  for (const auto& s : traj.report.steps) CHECK(std::abs(s.norm - 1.0) < 1e-8);
}

TEST_CASE("evolve with zero Hamiltonian is constant") {
  MPO h0 = q::number_mpo(4);
  mpo_scale(h0, 0.0);
  auto h = sch::TimeDependentHamiltonian::make(std::move(h0));
  TensorTrain psi = q::coherent_state_qtt(1.5, 4, 1e-12);
  auto traj = sch::evolve(h, psi, linspace(0, 1, 11), sch::Method::Rk4, {1e-12, 0});
  CHECK(sch::overlap_error(psi, traj.final_state) < 1e-12);
}

TEST_CASE("diagonal hamiltonian conserves every fock modulus") {
  // f = 0 leaves the kerr Hamiltonian diagonal in the Fock basis
  models::KerrParams p;
  p.bits = 5;
  p.alpha0 = 2.0;
  p.drive_a1 = 0.0;
  p.drive_a2 = 0.0;
  auto m = models::kerr_model(p);
  auto traj = sch::evolve(m.h, m.psi0, linspace(0, 0.2, 401), sch::Method::Rk4, {1e-12, 0});
  auto before = oracle::tt_to_dense(m.psi0);
  auto after = oracle::tt_to_dense(traj.final_state);
  for (int n = 0; n < before.size(); ++n)
    CHECK(std::abs(std::abs(after[n]) - std::abs(before[n])) < 1e-10);
}

TEST_CASE("semiclassical limit: free rotation and the K=0 match") {
  models::KerrParams p;
  p.bits = 6;
  p.alpha0 = 2.0;
  p.kerr = 0.0;
  // f = 0: alpha(t) = alpha0 e^{-i omega t}
  {
    models::KerrParams p0 = p;
    p0.drive_a1 = p0.drive_a2 = 0.0;
    auto grid = linspace(0, 2, 21);
    auto alpha = models::semiclassical_kerr(p0, grid, 40);
    for (size_t i = 0; i < grid.size(); ++i)
      CHECK(std::abs(alpha[i] - 2.0 * std::exp(cplx(0, -grid[i]))) < 1e-10);
  }
  // with drive, K = 0: the full quantum <a> follows the scalar ODE exactly
  auto m = models::kerr_model(p);
  MPO a_op = q::annihilation_mpo(p.bits, 1e-12);
  auto grid = linspace(0, 1.0, 501);
  auto traj = sch::evolve(m.h, m.psi0, grid, sch::Method::Rk4, {1e-11, 0}, {{"a", a_op}});
  auto alpha = models::semiclassical_kerr(p, grid, 20);
  for (size_t i = 0; i < grid.size(); i += 100)
    CHECK(std::abs(traj.observables["a"][i] - alpha[i]) < 1e-6);
}

TEST_CASE("kerr model pieces match the dense assembly") {
  models::KerrParams p;
  p.bits = 5;
  p.alpha0 = 1.0;
  auto m = models::kerr_model(p);
  auto h0 = oracle::mpo_to_dense(m.h.h0);
  auto h1 = oracle::mpo_to_dense(*m.h.h1);
  const size_t dim = 32;
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = 0; j < dim; ++j) {
      const double ni = double(i);
      const double diag = p.omega0 * ni + 0.5 * p.kerr * ni * (ni - 1.0);
      CHECK(std::abs(h0(i, j) - (i == j ? diag : 0.0)) < 1e-10);
      double off = 0.0;
      if (j == i + 2) off = std::sqrt(double((i + 1) * (i + 2)));
      if (i == j + 2) off = std::sqrt(double((j + 1) * (j + 2)));
      CHECK(std::abs(h1(i, j) - off) < 1e-10);
    }
  CHECK(m.h.h0.max_bond() <= 20);
  CHECK(m.h.h1->max_bond() <= 20);
}

TEST_CASE("hamiltonian pieces are hermitian at small size") {
  models::KerrParams p;
  p.bits = 4;
  p.alpha0 = 1.0;
  auto m = models::kerr_model(p);
  auto h0 = oracle::mpo_to_dense(m.h.h0);
  auto h1 = oracle::mpo_to_dense(*m.h.h1);
  CHECK((h0 - h0.adjoint()).cwiseAbs().maxCoeff() < 1e-11);
  CHECK((h1 - h1.adjoint()).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("krylov exponential matches a dense exponential") {
  const size_t n = 24;
  dense::MatrixXcd h = dense::MatrixXcd::Random(n, n);
  h = (h + h.adjoint()).eval();
  std::vector<cplx> x(n);
  Rng rng(3);
  for (auto& v : x) v = rng.cnorm();
  const cplx coeff(0, -0.31);
  auto matvec = [&](const cplx* in, cplx* out) {
    Eigen::Map<const dense::VectorXcd> vi(in, n);
    Eigen::Map<dense::VectorXcd> vo(out, n);
    vo = h * vi;
  };
  auto y = sch::krylov_expm_apply(matvec, x, coeff, 1e-12);
  dense::VectorXcd ref = dense::expm(coeff * h) * Eigen::Map<const dense::VectorXcd>(x.data(), n);
  double err = 0;
  for (size_t i = 0; i < n; ++i) err = std::max(err, std::abs(y[i] - ref[i]));
  CHECK(err < 1e-10);
}
