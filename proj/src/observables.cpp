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

#include "qtt/observables.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace qtt::observables {

double WignerGrid::cell_area() const {
  const double dre = (re_max - re_min) / double(re_points - 1);
  const double dim = (im_max - im_min) / double(im_points - 1);
  return dre * dim;
}

namespace {

// Scaled generalized Laguerre column: values[j] = L_j^{(k)}(x) * 2^{-shift[j]}
// with per-step rescaling, so huge orders stay representable.
struct ScaledLaguerre {
  std::vector<double> value;
  std::vector<long> shift;
};

ScaledLaguerre laguerre_column(size_t jmax, size_t k, double x) {
  ScaledLaguerre out;
  out.value.resize(jmax + 1);
  out.shift.resize(jmax + 1, 0);
  double lm1 = 1.0;                      // L_0
  double l = 1.0 + double(k) - x;        // L_1
  long sm1 = 0, s = 0;
  out.value[0] = lm1;
  if (jmax >= 1) {
    out.value[1] = l;
    out.shift[1] = 0;
  }
  for (size_t j = 1; j < jmax; ++j) {
    // align exponents before combining
    const long ds = s - sm1;
    const double lm1_aligned = std::ldexp(lm1, static_cast<int>(-ds));
    double next =
        ((2.0 * double(j) + double(k) + 1.0 - x) * l - (double(j) + double(k)) * lm1_aligned) /
        double(j + 1);
    long sn = s;
    while (std::abs(next) > 1e150) {
      next = std::ldexp(next, -100);
      sn += 100;
      l = std::ldexp(l, -100);
    }
    lm1 = l;
    sm1 = s;
    l = next;
    s = sn;
    out.value[j + 1] = l;
    out.shift[j + 1] = s;
  }
  return out;
}

}  // namespace

double wigner_point(const dense::MatrixXcd& rho, cplx alpha) {
  const size_t dim = static_cast<size_t>(rho.rows());
  if (dim > 4096) throw DimensionError("wigner: dimension cap exceeded");
  const cplx beta = 2.0 * alpha;  // parity kernel = D(2 alpha) Pi
  const double b2 = std::norm(beta);
  cplx acc = 0;
  if (b2 == 0.0) {
    for (size_t n = 0; n < dim; ++n)
      acc += rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) *
             ((n % 2 == 0) ? 1.0 : -1.0);
    return (2.0 / M_PI) * acc.real();
  }
  const double logb = 0.5 * std::log(b2);
  const cplx unit = beta / std::abs(beta);
  // one Laguerre column serves each diagonal k = m - n >= 0;
  // D[m, n](beta) = sqrt(n!/m!) beta^k e^{-b2/2} L_n^{(k)}(b2) for m = n + k
  for (size_t k = 0; k < dim; ++k) {
    const auto lag = laguerre_column(dim - k, k, b2);
    const cplx phase = std::pow(unit, double(k));
    for (size_t n = 0; n + k < dim; ++n) {
      const size_t m = n + k;
      const double lg = 0.5 * (std::lgamma(double(n) + 1.0) - std::lgamma(double(m) + 1.0)) +
                        double(k) * logb - 0.5 * b2;
      const double mag =
          std::exp(lg + double(lag.shift[n]) * 0.6931471805599453) * lag.value[n];
      const cplx dmn = mag * phase;  // D[m, n]
      const double par_m = (m % 2 == 0) ? 1.0 : -1.0;
      const double par_n = (n % 2 == 0) ? 1.0 : -1.0;
      // W = (2/pi) sum_{mn} rho[m, n] (-1)^m D[n, m];
      // D[n, m](beta) = conj(D[m, n](-beta)) = (-1)^k conj(D[m, n](beta))
      const cplx dnm = std::conj(dmn) * ((k % 2 == 0) ? 1.0 : -1.0);
      acc += rho(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) * par_m * dnm;
      if (k > 0)
        acc += rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) * par_n * dmn;
    }
  }
  return (2.0 / M_PI) * acc.real();
}

WignerGrid wigner(const dense::MatrixXcd& rho, WignerGrid grid) {
  grid.values.assign(grid.re_points * grid.im_points, 0.0);
  for (size_t j = 0; j < grid.im_points; ++j)
    for (size_t i = 0; i < grid.re_points; ++i)
      grid.at(j, i) = wigner_point(rho, cplx(grid.re_at(i), grid.im_at(j)));
  return grid;
}

Telemetry telemetry(const purified::PurifiedDensityMatrix& state) {
  Telemetry t;
  t.chi_q = state.max_chi_q();
  t.chi_e = state.max_chi_e();
  t.chi_mu = state.mu_dim();
  t.element_count = state.element_count();
  t.trace = state.trace();
  t.purity = state.purity();
  return t;
}

void write_wigner(const std::string& path, const WignerGrid& grid) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f.precision(17);
  for (size_t j = 0; j < grid.im_points; ++j)
    for (size_t i = 0; i < grid.re_points; ++i)
      f << grid.re_at(i) << ' ' << grid.im_at(j) << ' ' << grid.at(j, i) << '\n';
  nlohmann::json meta;
  meta["re_min"] = grid.re_min;
  meta["re_max"] = grid.re_max;
  meta["im_min"] = grid.im_min;
  meta["im_max"] = grid.im_max;
  meta["re_points"] = grid.re_points;
  meta["im_points"] = grid.im_points;
  meta["columns"] = {"Re(alpha)", "Im(alpha)", "W"};
  std::ofstream mf(path + ".json");
  mf << meta.dump(2) << '\n';
}

}  // namespace qtt::observables
