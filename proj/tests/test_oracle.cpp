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

#include "qtt/oracle.hpp"
#include "qtt/quantics.hpp"

using namespace qtt;

namespace {

std::vector<double> linspace(double a, double b, size_t n) {
  std::vector<double> t(n);
  for (size_t i = 0; i < n; ++i) t[i] = a + (b - a) * double(i) / double(n - 1);
  return t;
}

}  // namespace

TEST_CASE("tt_to_dense reproduces every amplitude of a random train") {
  TensorTrain tt = random_tt(std::vector<size_t>(8, 2), 7, 3);
  auto dense_v = oracle::tt_to_dense(tt);
  for (std::uint64_t n = 0; n < 256; n += 17) {
    std::vector<size_t> idx(8);
    for (size_t i = 0; i < 8; ++i) idx[i] = (n >> (7 - i)) & 1;
    CHECK(std::abs(dense_v[static_cast<Eigen::Index>(n)] - evaluate(tt, idx)) < 1e-12);
  }
}

TEST_CASE("eigenstate picks up the exact phase") {
  const size_t dim = 16;
  dense::MatrixXcd h = dense::MatrixXcd::Zero(dim, dim);
  for (size_t i = 0; i < dim; ++i) h(i, i) = double(i);
  dense::VectorXcd psi0 = dense::VectorXcd::Zero(dim);
  psi0[3] = 1.0;
  auto traj = oracle::dense_schrodinger([&](double) { return h; }, psi0, linspace(0, 1, 11), 50);
  const cplx expect = std::exp(cplx(0, -3.0));
  CHECK(std::abs(traj.back()[3] - expect) < 1e-10);
}

TEST_CASE("step-halving convergence of the schrodinger reference") {
  dense::MatrixXcd h = 0.2 * dense::MatrixXcd::Random(12, 12);
  h = (h + h.adjoint()).eval();
  dense::VectorXcd psi0 = dense::VectorXcd::Random(12);
  psi0.normalize();
  auto grid = linspace(0, 2, 5);
  auto a = oracle::dense_schrodinger([&](double) { return h; }, psi0, grid, 100);
  auto b = oracle::dense_schrodinger([&](double) { return h; }, psi0, grid, 200);
  CHECK((a.back() - b.back()).norm() < 1e-9);
}

TEST_CASE("amplitude damping relaxes the occupation exponentially") {
  const size_t dim = 4;
  const double kappa = 1.0;
  dense::MatrixXcd a = dense::MatrixXcd::Zero(dim, dim);
  for (size_t i = 0; i + 1 < dim; ++i) a(i, i + 1) = std::sqrt(double(i + 1));
  oracle::DenseLindbladModel model;
  model.h = [&](double) { return dense::MatrixXcd::Zero(dim, dim); };
  model.jumps = {std::sqrt(kappa) * a};
  dense::MatrixXcd rho0 = dense::MatrixXcd::Zero(dim, dim);
  rho0(1, 1) = 1.0;
  auto grid = linspace(0, 2, 9);
  auto traj = oracle::dense_lindblad(model, rho0, grid, 200);
  for (size_t i = 0; i < grid.size(); ++i) {
    double n = 0;
    for (size_t k = 0; k < dim; ++k) n += double(k) * traj[i](k, k).real();
    CHECK(std::abs(n - std::exp(-kappa * grid[i])) < 1e-8);
    CHECK(std::abs(traj[i].trace().real() - 1.0) < 1e-10);
  }
}

TEST_CASE("pure dephasing leaves populations fixed") {
  const size_t dim = 4;
  dense::MatrixXcd n = dense::MatrixXcd::Zero(dim, dim);
  for (size_t i = 0; i < dim; ++i) n(i, i) = double(i);
  oracle::DenseLindbladModel model;
  model.h = [&](double) { return dense::MatrixXcd::Zero(dim, dim); };
  model.jumps = {0.7 * n};
  dense::MatrixXcd rho0 = dense::MatrixXcd::Constant(dim, dim, cplx(0.25));
  auto traj = oracle::dense_lindblad(model, rho0, linspace(0, 1, 5), 100);
  for (size_t k = 0; k < dim; ++k)
    CHECK(std::abs(traj.back()(k, k) - rho0(k, k)) < 1e-10);
  // off-diagonals decay
  CHECK(std::abs(traj.back()(0, 3)) < std::abs(rho0(0, 3)));
}

TEST_CASE("zero jumps reduce the lindblad oracle to the schrodinger one") {
  Rng rng(9);
  dense::MatrixXcd h = dense::MatrixXcd::Random(8, 8);
  h = (h + h.adjoint()).eval();
  dense::VectorXcd psi0 = dense::VectorXcd::Random(8);
  psi0.normalize();
  oracle::DenseLindbladModel model;
  model.h = [&](double) { return h; };
  auto grid = linspace(0, 1, 5);
  auto rho_traj = oracle::dense_lindblad(model, psi0 * psi0.adjoint(), grid, 100);
  auto psi_traj = oracle::dense_schrodinger([&](double) { return h; }, psi0, grid, 100);
  const auto rho_ref = (psi_traj.back() * psi_traj.back().adjoint()).eval();
  CHECK((rho_traj.back() - rho_ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("trace distance of identical matrices is zero, of orthogonal pure states one") {
  dense::MatrixXcd r1 = dense::MatrixXcd::Zero(2, 2);
  r1(0, 0) = 1.0;
  dense::MatrixXcd r2 = dense::MatrixXcd::Zero(2, 2);
  r2(1, 1) = 1.0;
  CHECK(oracle::trace_distance(r1, r1) < 1e-14);
  CHECK(std::abs(oracle::trace_distance(r1, r2) - 1.0) < 1e-14);
}
