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

#include "qtt/quantics.hpp"

#include <cmath>

#include "qtt/tci.hpp"

namespace qtt::quantics {

std::vector<size_t> encode(std::uint64_t n, size_t bits) {
  if (bits >= 64 || n >= (std::uint64_t(1) << bits))
    throw DimensionError("encode: value out of range for the register");
  std::vector<size_t> sigma(bits);
  for (size_t i = 0; i < bits; ++i) sigma[i] = (n >> (bits - 1 - i)) & 1u;
  return sigma;
}

std::uint64_t decode(const std::vector<size_t>& sigma) {
  std::uint64_t n = 0;
  for (size_t b : sigma) {
    if (b > 1) throw DimensionError("decode: non-binary digit");
    n = (n << 1) | b;
  }
  return n;
}

TensorTrain fock_state(std::uint64_t n, size_t bits) {
  const auto sigma = encode(n, bits);
  std::vector<std::vector<cplx>> amps(bits, {cplx(0), cplx(0)});
  for (size_t i = 0; i < bits; ++i) amps[i][sigma[i]] = 1.0;
  return product_state(amps);
}

TensorTrain polynomial_qtt(size_t bits, const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw DimensionError("polynomial_qtt: empty coefficient list");
  const size_t m = coeffs.size() - 1;
  // Pascal triangle of binomials up to degree m
  std::vector<std::vector<double>> binom(m + 1, std::vector<double>(m + 1, 0.0));
  for (size_t j = 0; j <= m; ++j) {
    binom[j][0] = 1.0;
    for (size_t i = 1; i <= j; ++i)
      binom[j][i] = binom[j - 1][i - 1] + ((i <= j - 1) ? binom[j - 1][i] : 0.0);
  }
  auto weight = [&](size_t site) { return std::pow(2.0, double(bits - 1 - site)); };
  auto powv = [](double x, size_t p) {
    double r = 1.0;
    for (size_t i = 0; i < p; ++i) r *= x;
    return r;
  };
  if (bits == 1) {
    Core3 c(1, 2, 1);
    for (size_t s = 0; s < 2; ++s) {
      double v = 0;
      for (size_t j = 0; j <= m; ++j) v += coeffs[j] * powv(double(s), j);
      c.at(0, s, 0) = v;
    }
    TensorTrain tt;
    tt.cores.push_back(std::move(c));
    return tt;
  }
  std::vector<Core3> cores;
  {
    Core3 first(1, 2, m + 1);
    const double w = weight(0);
    for (size_t s = 0; s < 2; ++s)
      for (size_t j = 0; j <= m; ++j) first.at(0, s, j) = powv(w * double(s), j);
    cores.push_back(std::move(first));
  }
  for (size_t k = 1; k + 1 < bits; ++k) {
    Core3 c(m + 1, 2, m + 1);
    const double w = weight(k);
    for (size_t i = 0; i <= m; ++i)
      for (size_t s = 0; s < 2; ++s)
        for (size_t j = i; j <= m; ++j) c.at(i, s, j) = binom[j][i] * powv(w * double(s), j - i);
    cores.push_back(std::move(c));
  }
  {
    Core3 last(m + 1, 2, 1);
    const double w = weight(bits - 1);
    for (size_t i = 0; i <= m; ++i)
      for (size_t s = 0; s < 2; ++s) {
        double v = 0;
        for (size_t j = i; j <= m; ++j) v += coeffs[j] * binom[j][i] * powv(w * double(s), j - i);
        last.at(i, s, 0) = v;
      }
    cores.push_back(std::move(last));
  }
  return TensorTrain(std::move(cores));
}

MPO diagonal_mpo(const TensorTrain& qtt) {
  std::vector<Core4> cores;
  cores.reserve(qtt.num_sites());
  for (const auto& m : qtt.cores) {
    Core4 c(m.l, m.d, m.d, m.r);
    for (size_t a = 0; a < m.l; ++a)
      for (size_t s = 0; s < m.d; ++s)
        for (size_t b = 0; b < m.r; ++b) c.at(a, s, s, b) = m.at(a, s, b);
    cores.push_back(std::move(c));
  }
  MPO out;
  out.cores = std::move(cores);
  return out;
}

namespace {

MPO mpo_transpose(const MPO& op) {
  std::vector<Core4> cores;
  cores.reserve(op.num_sites());
  for (const auto& c : op.cores) {
    Core4 o(c.l, c.dc, c.dr, c.r);
    for (size_t a = 0; a < c.l; ++a)
      for (size_t s = 0; s < c.dr; ++s)
        for (size_t t = 0; t < c.dc; ++t)
          for (size_t b = 0; b < c.r; ++b) o.at(a, t, s, b) = c.at(a, s, t, b);
    cores.push_back(std::move(o));
  }
  MPO out;
  out.cores = std::move(cores);
  return out;
}

}  // namespace

MPO shift_mpo(size_t bits, std::int64_t m) {
  if (m < 0) return mpo_transpose(shift_mpo(bits, -m));
  if (static_cast<std::uint64_t>(m) >= (std::uint64_t(1) << bits))
    throw DimensionError("shift_mpo: |m| must be below 2^bits");
  // carry automaton, carry flows from the least significant site (right end)
  // to the most significant; amplitudes shifted past the top are dropped
  std::vector<Core4> cores;
  for (size_t k = 0; k < bits; ++k) {
    const size_t lw = (k == 0) ? 1 : 2;
    const size_t rw = (k == bits - 1) ? 1 : 2;
    const size_t mk = (static_cast<std::uint64_t>(m) >> (bits - 1 - k)) & 1u;
    Core4 c(lw, 2, 2, rw);
    for (size_t cl = 0; cl < lw; ++cl)
      for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j)
          for (size_t cr = 0; cr < rw; ++cr)
            if (i + mk + cr == j + 2 * cl) c.at(cl, i, j, cr) = 1.0;
    cores.push_back(std::move(c));
  }
  MPO out(std::move(cores));
  mpo_truncate(out, {1e-14, 0});
  return out;
}

MPO annihilation_mpo(size_t bits, double tol) {
  tci::FunctionOracle oracle({std::vector<size_t>(bits, 2)}, [bits](const std::vector<size_t>& s) {
    return cplx(std::sqrt(double(decode(s))));
  });
  tci::TciReport rep;
  TensorTrain sq = tci::tci_build(oracle, std::max(tol * 0.01, 5e-15), 64, &rep);
  if (!rep.converged) throw ConvergenceError("annihilation_mpo: TCI of sqrt(n) did not converge");
  MPO b = diagonal_mpo(sq);
  MPO t = shift_mpo(bits, 1);
  return mpo_mul(t, b, {tol, 0});
}

MPO creation_mpo(size_t bits, double tol) { return mpo_adjoint(annihilation_mpo(bits, tol)); }

MPO annihilation_power_mpo(size_t bits, size_t m, double tol) {
  if (m < 1) throw DimensionError("annihilation_power_mpo: power must be >= 1");
  if (static_cast<std::uint64_t>(m) >= (std::uint64_t(1) << bits))
    throw DimensionError("annihilation_power_mpo: power exceeds the register");
  // diagonal sqrt(n (n-1) ... (n-m+1)), zero below n = m
  tci::FunctionOracle oracle(
      {std::vector<size_t>(bits, 2)}, [m](const std::vector<size_t>& s) {
        const auto n = decode(s);
        if (n < m) return cplx(0.0);
        double lg = 0.0;
        for (size_t p = 0; p < m; ++p) lg += std::log(double(n - p));
        return cplx(std::exp(0.5 * lg));
      });
  tci::TciReport rep;
  TensorTrain ff = tci::tci_build(oracle, std::max(tol * 0.01, 5e-15), 64, &rep);
  if (!rep.converged)
    throw ConvergenceError("annihilation_power_mpo: TCI of the falling factorial did not converge");
  MPO g = diagonal_mpo(ff);
  MPO t = shift_mpo(bits, static_cast<std::int64_t>(m));
  return mpo_mul(t, g, {tol, 0});
}

MPO number_power_mpo(size_t bits, size_t m) {
  if (m == 0) return identity_mpo(std::vector<size_t>(bits, 2));
  // prod_{p=0}^{m-1} (n - p) expanded to monomial coefficients
  std::vector<double> coeffs{1.0};
  for (size_t p = 0; p < m; ++p) {
    std::vector<double> next(coeffs.size() + 1, 0.0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i];
      next[i] -= coeffs[i] * double(p);
    }
    coeffs = std::move(next);
  }
  return diagonal_mpo(polynomial_qtt(bits, coeffs));
}

MPO number_mpo(size_t bits) { return number_power_mpo(bits, 1); }

TensorTrain coherent_state_qtt(cplx alpha, size_t bits, double tol, bool check_support) {
  const double n_max = std::pow(2.0, double(bits));
  if (check_support && std::norm(alpha) > n_max / 3.0)
    throw DimensionError("coherent_state_qtt: |alpha|^2 exceeds 2^bits / 3");
  if (std::abs(alpha) == 0.0) return fock_state(0, bits);
  const double log_abs = std::log(std::abs(alpha));
  const double arg = std::arg(alpha);
  const double offset = -0.5 * std::norm(alpha);
  tci::FunctionOracle oracle(
      {std::vector<size_t>(bits, 2)}, [=](const std::vector<size_t>& s) {
        const double n = double(decode(s));
        const double lg = offset + n * log_abs - 0.5 * std::lgamma(n + 1.0);
        return std::exp(cplx(lg, n * arg));
      });
  tci::TciReport rep;
  TensorTrain psi = tci::tci_build(oracle, tol, 64, &rep);
  if (!rep.converged) throw ConvergenceError("coherent_state_qtt: TCI did not converge");
  truncate(psi, {tol, 0});
  scale(psi, 1.0 / psi.norm());
  return psi;
}

double default_box_length(size_t n_bits) {
  return 2.0 * std::sqrt(2.0 * std::pow(2.0, double(n_bits))) + 8.0;
}

std::vector<double> position_grid(size_t x_bits, double box_length) {
  const size_t n = size_t(1) << x_bits;
  std::vector<double> x(n);
  for (size_t k = 0; k < n; ++k) x[k] = -box_length / 2.0 + box_length * double(k) / double(n);
  return x;
}

double hermite_function(unsigned n, double x) {
  // phi_0 = pi^{-1/4} exp(-x^2/2); phi_n = sqrt(2/n) x phi_{n-1} - sqrt((n-1)/n) phi_{n-2}
  const double phi0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return phi0;
  double pm1 = phi0;
  double p = std::sqrt(2.0) * x * phi0;
  for (unsigned k = 2; k <= n; ++k) {
    const double next = std::sqrt(2.0 / k) * x * p - std::sqrt(double(k - 1) / k) * pm1;
    pm1 = p;
    p = next;
  }
  return p;
}

HermiteTransform hermite_transform_mpo(size_t n_bits, size_t x_bits, double box_length,
                                       double tol) {
  const size_t sites = std::max(n_bits, x_bits);
  std::vector<size_t> row_dims(sites, 1), col_dims(sites, 1);
  for (size_t i = 0; i < x_bits; ++i) row_dims[i] = 2;
  for (size_t i = 0; i < n_bits; ++i) col_dims[i] = 2;
  const size_t nx = size_t(1) << x_bits;
  auto kernel = [&](const std::vector<size_t>& row, const std::vector<size_t>& col) {
    std::uint64_t k = 0, n = 0;
    for (size_t i = 0; i < x_bits; ++i) k = (k << 1) | row[i];
    for (size_t i = 0; i < n_bits; ++i) n = (n << 1) | col[i];
    const double x = -box_length / 2.0 + box_length * double(k) / double(nx);
    return cplx(hermite_function(static_cast<unsigned>(n), x));
  };
  tci::TciReport rep;
  HermiteTransform out;
  out.forward = tci::tci_build_2d(kernel, row_dims, col_dims, tol, 128, &rep);
  if (!rep.converged) throw ConvergenceError("hermite_transform_mpo: TCI did not converge");
  out.backward = mpo_transpose(out.forward);
  mpo_scale(out.backward, box_length / double(nx));
  out.n_bits = n_bits;
  out.x_bits = x_bits;
  out.box_length = box_length;
  return out;
}

}  // namespace qtt::quantics
