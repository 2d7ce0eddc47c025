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

#pragma once

#include <string>

#include "qtt/purified.hpp"

// Derived quantities for analysis: compression telemetry and the Wigner
// function of a reduced cavity state.

namespace qtt::observables {

struct WignerGrid {
  double re_min = -13.0, re_max = 2.0;
  double im_min = 0.0, im_max = 15.0;
  size_t re_points = 61, im_points = 61;
  std::vector<double> values;  // row-major over (im, re)

  double re_at(size_t i) const {
    return re_min + (re_max - re_min) * double(i) / double(re_points - 1);
  }
  double im_at(size_t j) const {
    return im_min + (im_max - im_min) * double(j) / double(im_points - 1);
  }
  double& at(size_t j, size_t i) { return values[j * re_points + i]; }
  double at(size_t j, size_t i) const { return values[j * re_points + i]; }
  double cell_area() const;
};

/// W(alpha) = (2/pi) Tr[D(alpha) rho D(-alpha) Pi] evaluated through the
/// displaced-parity matrix elements with log-domain Laguerre recurrences.
WignerGrid wigner(const dense::MatrixXcd& rho_reduced, WignerGrid grid);

/// Single phase-space point of the same quantity.
double wigner_point(const dense::MatrixXcd& rho_reduced, cplx alpha);

struct Telemetry {
  size_t chi_q = 1, chi_e = 1, chi_mu = 1;
  size_t element_count = 0;
  double purity = 1.0;
  double trace = 1.0;
};

Telemetry telemetry(const purified::PurifiedDensityMatrix& state);

/// Columnar text (Re, Im, W) plus a JSON metadata sidecar at path + ".json".
void write_wigner(const std::string& path, const WignerGrid& grid);

}  // namespace qtt::observables
