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

// Acceptance gate: one case per criterion, each printing its pass/fail line
// with the measured values. Criterion 9 is expected to fail its first
// sub-check; see the test body.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "qtt/verify.hpp"

using qtt::verify::run_criterion;

namespace {

bool run_and_print(int id) {
  const auto r = run_criterion(id);
  std::cout << qtt::verify::format_line(r) << std::flush;
  return r.pass;
}

}  // namespace

TEST_CASE("criterion 1: ladder and number-power operator ranks") { CHECK(run_and_print(1)); }

TEST_CASE("criterion 2: operator error at bond dimension 10") { CHECK(run_and_print(2)); }

TEST_CASE("criterion 3: integrator order fits on the Kerr benchmark") {
  CHECK(run_and_print(3));
}

TEST_CASE("criterion 4: semiclassical exactness at K = 0") { CHECK(run_and_print(4)); }

TEST_CASE("criterion 5: two-mode Lindblad against the dense oracle") {
  CHECK(run_and_print(5));
}

TEST_CASE("criterion 6: amplitude damping closed form") { CHECK(run_and_print(6)); }

TEST_CASE("criterion 7: cat-qubit Z gate error scaling") { CHECK(run_and_print(7)); }

TEST_CASE("criterion 8: dephasing reduces compressibility monotonically") {
  CHECK(run_and_print(8));
}

TEST_CASE("criterion 9: transmon spectrum and dressed drive frequency") {
  // The 5.320 GHz target is the asymptotic estimate sqrt(8 Ec Ej) - Ec; the
  // exact spectrum of 4 Ec n^2 - Ej cos(phi) at these parameters has
  // eps1 - eps0 = 5.3037 GHz (two independent diagonalizations agree to
  // 0.03 MHz, and the dressed 7.522 GHz sub-check derived from the same
  // spectrum passes at 0.2 MHz). The 1 MHz bound against 5.320 is therefore
  // unattainable as stated; it is asserted anyway rather than weakened.
  CHECK(run_and_print(9));
}

TEST_CASE("criterion 10: branch crossings and the ionization signature") {
  CHECK(run_and_print(10));
}

TEST_CASE("criterion 11: structural invariants of the purified representation") {
  CHECK(run_and_print(11));
}
