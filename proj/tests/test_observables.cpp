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
#include <cstdio>
#include <fstream>

#include "qtt/observables.hpp"
#include "qtt/quantics.hpp"

using namespace qtt;
namespace ob = qtt::observables;
namespace pu = qtt::purified;
namespace q = qtt::quantics;

namespace {

dense::MatrixXcd coherent_rho(cplx alpha, size_t dim) {
  dense::VectorXcd psi(dim);
  for (size_t n = 0; n < dim; ++n) {
    const double lg = -0.5 * std::norm(alpha) + 0.5 * double(n) * std::log(std::norm(alpha)) -
                      0.5 * std::lgamma(double(n) + 1.0);
    psi[static_cast<Eigen::Index>(n)] =
        std::exp(lg) * std::exp(cplx(0, double(n) * std::arg(alpha)));
  }
  psi.normalize();
  return psi * psi.adjoint();
}

}  // namespace

TEST_CASE("vacuum wigner function is the textbook gaussian") {
  dense::MatrixXcd rho = dense::MatrixXcd::Zero(16, 16);
  rho(0, 0) = 1.0;
  CHECK(std::abs(ob::wigner_point(rho, 0.0) - 2.0 / M_PI) < 1e-12);
  for (double re : {-1.0, 0.3, 1.2})
    for (double im : {-0.7, 0.0, 0.9}) {
      const cplx a(re, im);
      const double expect = 2.0 / M_PI * std::exp(-2.0 * std::norm(a));
      CHECK(std::abs(ob::wigner_point(rho, a) - expect) < 1e-10);
    }
}

TEST_CASE("coherent-state wigner is a shifted gaussian") {
  const cplx beta(1.0, 1.0);
  auto rho = coherent_rho(beta, 64);
  for (double re : {0.2, 1.0, 1.8})
    for (double im : {0.4, 1.0, 1.6}) {
      const cplx a(re, im);
      const double expect = 2.0 / M_PI * std::exp(-2.0 * std::norm(a - beta));
      CHECK(std::abs(ob::wigner_point(rho, a) - expect) < 1e-6);
    }
}

TEST_CASE("cat-state wigner shows alternating interference fringes") {
  const double alpha = 2.0;
  const size_t dim = 32;
  dense::VectorXcd psi = dense::VectorXcd::Zero(dim);
  for (size_t n = 0; n < dim; n += 2) {  // even cat
    const double lg = -0.5 * alpha * alpha + double(n) * std::log(alpha) -
                      0.5 * std::lgamma(double(n) + 1.0);
    psi[static_cast<Eigen::Index>(n)] = std::exp(lg);
  }
  psi.normalize();
  dense::MatrixXcd rho = psi * psi.adjoint();
  // fringes along Im(alpha) at the origin alternate in sign with period
  // pi / (2 alpha)
  const double period = M_PI / (2.0 * alpha);
  const double w0 = ob::wigner_point(rho, cplx(0, 0));
  const double w_half = ob::wigner_point(rho, cplx(0, period / 2.0));
  const double w_full = ob::wigner_point(rho, cplx(0, period));
  CHECK(w0 > 0.0);
  CHECK(w_half < 0.0);
  CHECK(w_full > 0.0);
}

TEST_CASE("wigner grid integrates to the trace") {
  auto rho = coherent_rho(cplx(0.5, 0.8), 32);
  ob::WignerGrid grid;
  grid.re_min = -3.5;
  grid.re_max = 4.5;
  grid.im_min = -3.2;
  grid.im_max = 4.8;
  grid.re_points = 81;
  grid.im_points = 81;
  auto w = ob::wigner(rho, grid);
  // with the peak-2/pi convention of the vacuum example, the d^2alpha
  // integral equals the trace directly
  double integral = 0;
  for (double v : w.values) integral += v;
  integral *= w.cell_area();
  CHECK(integral > 0.95);
  CHECK(integral < 1.05);
}

TEST_CASE("wigner of a mixed hermitian state is real and bounded") {
  auto rho = (0.5 * coherent_rho(cplx(1.0, 0.0), 32) + 0.5 * coherent_rho(cplx(-1.0, 0.0), 32))
                 .eval();
  for (double re : {-1.0, 0.0, 1.0}) {
    const double w = ob::wigner_point(rho, cplx(re, 0.1));
    CHECK(std::isfinite(w));
    CHECK(std::abs(w) <= 2.0 / M_PI + 1e-12);
  }
}

TEST_CASE("telemetry of simple states") {
  pu::ModeLayout layout{{{3, pu::BasisTag::Fock}, {2, pu::BasisTag::Fock}}};
  auto pure = pu::from_pure_product({q::fock_state(1, 3), q::fock_state(0, 2)}, layout);
  auto t = ob::telemetry(pure);
  CHECK(t.chi_q == 1);
  CHECK(t.chi_e == 1);
  CHECK(t.chi_mu == 1);
  CHECK(std::abs(t.purity - 1.0) < 1e-12);
  CHECK(std::abs(t.trace - 1.0) < 1e-12);
  CHECK(t.element_count == pure.psi.element_count());

  auto p0 = pu::from_pure_product({q::fock_state(0, 3), q::fock_state(0, 2)}, layout);
  scale(p0.psi, std::sqrt(0.5));
  scale(pure.psi, std::sqrt(0.5));
  auto mix = pu::matrix_add(p0, pure, pu::CompressionBudget::uniform(1e-12));
  auto tm = ob::telemetry(mix);
  CHECK(tm.chi_mu == 2);
  CHECK(std::abs(tm.purity - 0.5) < 1e-12);
}

TEST_CASE("wigner files carry the grid and a json sidecar") {
  dense::MatrixXcd rho = dense::MatrixXcd::Zero(4, 4);
  rho(0, 0) = 1.0;
  ob::WignerGrid grid;
  grid.re_points = 5;
  grid.im_points = 4;
  auto w = ob::wigner(rho, grid);
  const std::string path = "wigner_test.txt";
  ob::write_wigner(path, w);
  std::ifstream f(path);
  REQUIRE(f.good());
  size_t lines = 0;
  std::string line;
  while (std::getline(f, line)) ++lines;
  CHECK(lines == 20);
  std::ifstream mf(path + ".json");
  REQUIRE(mf.good());
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}
