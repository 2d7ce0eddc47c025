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

#include "qtt/models.hpp"

#include <cmath>

#include "qtt/quantics.hpp"
#include "qtt/tci.hpp"

namespace qtt::models {

namespace q = qtt::quantics;

// ---- Kerr ----

double KerrParams::f(double t) const {
  return drive_a1 * std::cos(drive_w1 * t) + drive_a2 * std::cos(drive_w2 * t);
}

KerrModel kerr_model(const KerrParams& p, double tol) {
  // omega0 n + K/2 n(n-1) is a quadratic in n, exact at rank 3
  MPO h0 = q::diagonal_mpo(
      q::polynomial_qtt(p.bits, {0.0, p.omega0 - 0.5 * p.kerr, 0.5 * p.kerr}));
  MPO a2 = q::annihilation_power_mpo(p.bits, 2, tol);
  MPO h1 = mpo_add(a2, mpo_adjoint(a2), {tol, 0});
  KerrModel m;
  m.h = schrodinger::TimeDependentHamiltonian::make(
      std::move(h0), std::move(h1), [p](double t) { return p.f(t); });
  m.psi0 = q::coherent_state_qtt(p.alpha0, p.bits, tol);
  return m;
}

std::vector<cplx> semiclassical_kerr(const KerrParams& p, const std::vector<double>& t_grid,
                                     int substeps) {
  auto rhs = [&](double t, cplx a) {
    return cplx(0, -1) * (p.omega0 * a + 2.0 * p.f(t) * std::conj(a) + p.kerr * std::norm(a) * a);
  };
  std::vector<cplx> out;
  out.reserve(t_grid.size());
  cplx a = p.alpha0;
  out.push_back(a);
  for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
    const double dt = (t_grid[i + 1] - t_grid[i]) / substeps;
    double t = t_grid[i];
    for (int s = 0; s < substeps; ++s) {
      const cplx k1 = rhs(t, a);
      const cplx k2 = rhs(t + dt / 2, a + (dt / 2) * k1);
      const cplx k3 = rhs(t + dt / 2, a + (dt / 2) * k2);
      const cplx k4 = rhs(t + dt, a + dt * k3);
      a += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += dt;
    }
    out.push_back(a);
  }
  return out;
}

// ---- cat qubit ----

double CatParams::alpha() const { return -std::sqrt(epsilon_d / g2); }

double CatParams::gate_time() const { return theta / (4.0 * std::abs(alpha()) * epsilon_z); }

double CatParams::adiabaticity() const { return 8.0 * std::abs(alpha()) * g2 / kappa_b; }

double CatParams::predicted_pz() const {
  const double a2 = alpha() * alpha();
  const double tz = gate_time();
  const double p_ph = a2 * kappa_a * tz;
  const double p_buf = theta * theta / (16.0 * a2 * a2 * tz) * kappa_b / (4.0 * g2 * g2);
  return p_ph + p_buf;
}

namespace {

purified::ModeLayout cat_layout(const CatParams& p) {
  return {{{p.bits_a, purified::BasisTag::Fock}, {p.bits_b, purified::BasisTag::Fock}}};
}

}  // namespace

lindblad::LindbladModel cat_model(const CatParams& p, double tol) {
  const double a2 = p.alpha() * p.alpha();
  if (std::pow(2.0, double(p.bits_a)) < 3.0 * a2)
    throw DimensionError("cat_model: memory register too small for 3 |alpha|^2");
  const auto layout = cat_layout(p);
  const TruncationPolicy pol{tol, 0};

  MPO am2 = q::annihilation_power_mpo(p.bits_a, 2, tol);
  MPO am2dag = mpo_adjoint(am2);
  MPO am = q::annihilation_mpo(p.bits_a, tol);
  MPO bm = q::annihilation_mpo(p.bits_b, tol);
  MPO bmdag = mpo_adjoint(bm);

  // g2 a^dag^2 b + g2 a^2 b^dag - eps_d (b + b^dag) + eps_z (a + a^dag).
  // The buffer drive enters with the sign that makes (g2 a^2 - eps_d)
  // annihilate the target manifold, so alpha = -sqrt(eps_d/g2) is real;
  // this is the b -> -b frame of the same model and leaves the
  // dissipators unchanged.
  MPO h = purified::chain_operator(layout, {{0, am2dag}, {1, bm}});
  mpo_scale(h, p.g2);
  {
    MPO t = purified::chain_operator(layout, {{0, am2}, {1, bmdag}});
    mpo_scale(t, p.g2);
    h = mpo_add(h, t, pol);
  }
  {
    MPO t = purified::chain_operator(layout, {{1, mpo_add(bm, bmdag, pol)}});
    mpo_scale(t, -p.epsilon_d);
    h = mpo_add(h, t, pol);
  }
  if (p.epsilon_z != 0.0) {
    MPO t = purified::chain_operator(layout, {{0, mpo_add(am, mpo_adjoint(am), pol)}});
    mpo_scale(t, p.epsilon_z);
    h = mpo_add(h, t, pol);
  }

  std::vector<MPO> jumps;
  {
    MPO lb = purified::chain_operator(layout, {{1, bm}});
    mpo_scale(lb, std::sqrt(p.kappa_b));
    jumps.push_back(std::move(lb));
  }
  if (p.kappa_a > 0.0) {
    MPO la = purified::chain_operator(layout, {{0, am}});
    mpo_scale(la, std::sqrt(p.kappa_a));
    jumps.push_back(std::move(la));
  }
  if (p.kappa_phi > 0.0) {
    MPO lphi = purified::chain_operator(layout, {{0, q::number_mpo(p.bits_a)}});
    mpo_scale(lphi, std::sqrt(p.kappa_phi));
    jumps.push_back(std::move(lphi));
  }
  return lindblad::LindbladModel::make(layout, std::move(h), {}, {}, std::move(jumps));
}

purified::PurifiedDensityMatrix cat_coherent_state(const CatParams& p, int sign, double tol) {
  TensorTrain mem = q::coherent_state_qtt(double(sign) * p.alpha(), p.bits_a, tol);
  TensorTrain buf = q::fock_state(0, p.bits_b);
  return purified::from_pure_product({mem, buf}, cat_layout(p));
}

purified::PurifiedDensityMatrix cat_plus_state(const CatParams& p, double tol) {
  TensorTrain plus = q::coherent_state_qtt(p.alpha(), p.bits_a, tol);
  TensorTrain minus = q::coherent_state_qtt(-p.alpha(), p.bits_a, tol);
  TensorTrain mem = add(plus, minus, {tol, 0});
  scale(mem, 1.0 / mem.norm());
  TensorTrain buf = q::fock_state(0, p.bits_b);
  return purified::from_pure_product({mem, buf}, cat_layout(p));
}

double z_gate_error(const CatParams& p, const purified::PurifiedDensityMatrix& final_state) {
  const size_t dim = size_t(1) << p.bits_a;
  dense::MatrixXcd rho = purified::reduced_density_matrix(final_state, 0);
  const double tr = rho.trace().real();
  if (tr <= 0) throw ConvergenceError("z_gate_error: empty reduced state");
  rho /= tr;
  // target: theta-rotated cat |alpha> + e^{i theta} |-alpha>, normalized
  const double alpha = p.alpha();
  dense::VectorXcd target = dense::VectorXcd::Zero(dim);
  const cplx phase = std::exp(cplx(0, p.theta));
  for (size_t n = 0; n < dim; ++n) {
    const double lg = -0.5 * alpha * alpha + double(n) * std::log(std::abs(alpha)) -
                      0.5 * std::lgamma(double(n) + 1.0);
    const double sign_a = (alpha < 0 && (n % 2 == 1)) ? -1.0 : 1.0;
    const double amp = std::exp(lg);
    // coherent(alpha) and coherent(-alpha) amplitudes differ by (-1)^n
    const double parity = (n % 2 == 1) ? -1.0 : 1.0;
    target[static_cast<Eigen::Index>(n)] = sign_a * amp * (1.0 + phase * parity);
  }
  target.normalize();
  const double fidelity = (target.adjoint() * rho * target)(0, 0).real();
  return 1.0 - fidelity;
}

// ---- transmon ----

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

double TransmonEigenbasis::omega01_ghz() const {
  return (energies[1] - energies[0]) / kTwoPi;
}

TransmonEigenbasis transmon_eigenbasis(const TransmonParams& p, double tol) {
  if (p.charge_cutoff < 100) throw DimensionError("transmon_eigenbasis: cutoff below 100");
  const int nc = p.charge_cutoff;
  const int dim = 2 * nc + 1;
  const double ec = kTwoPi * p.ec;
  const double ej = p.ej_over_ec * ec;

  // The potential is even in the charge index, so diagonalize the even and
  // odd parity sectors separately. Above the well the +-m pairs are
  // exponentially degenerate and a blind solver would mix their parity,
  // breaking the <a|n|a> = 0 selection rule.
  // even sector: |0>, (|m> + |-m>)/sqrt(2);  odd: (|m> - |-m>)/sqrt(2)
  Eigen::MatrixXd h_even = Eigen::MatrixXd::Zero(nc + 1, nc + 1);
  for (int m = 0; m <= nc; ++m) {
    h_even(m, m) = 4.0 * ec * double(m) * double(m);
    if (m + 1 <= nc) {
      const double v = (m == 0) ? -ej / std::sqrt(2.0) : -0.5 * ej;
      h_even(m, m + 1) = v;
      h_even(m + 1, m) = v;
    }
  }
  Eigen::MatrixXd h_odd = Eigen::MatrixXd::Zero(nc, nc);
  for (int m = 1; m <= nc; ++m) {
    h_odd(m - 1, m - 1) = 4.0 * ec * double(m) * double(m);
    if (m + 1 <= nc) {
      h_odd(m - 1, m) = -0.5 * ej;
      h_odd(m, m - 1) = -0.5 * ej;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_even(h_even), es_odd(h_odd);

  struct Level {
    double energy;
    int parity;  // 0 even, 1 odd
    int index;
  };
  std::vector<Level> levels;
  for (int i = 0; i <= nc; ++i) levels.push_back({es_even.eigenvalues()[i], 0, i});
  for (int i = 0; i < nc; ++i) levels.push_back({es_odd.eigenvalues()[i], 1, i});
  std::sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.parity < b.parity;
  });

  const size_t kept = size_t(1) << p.bits_t;
  if (static_cast<int>(kept) > dim)
    throw DimensionError("transmon_eigenbasis: register larger than the charge basis");

  TransmonEigenbasis out;
  out.charge_cutoff = nc;
  out.energies.resize(static_cast<Eigen::Index>(kept));
  out.vectors = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(kept));
  for (size_t a = 0; a < kept; ++a) {
    const Level& lv = levels[a];
    out.energies[static_cast<Eigen::Index>(a)] = lv.energy - levels[0].energy;
    Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
    if (lv.parity == 0) {
      const auto v = es_even.eigenvectors().col(lv.index);
      full[nc] = v[0];
      for (int m = 1; m <= nc; ++m) {
        full[nc + m] = v[m] / std::sqrt(2.0);
        full[nc - m] = v[m] / std::sqrt(2.0);
      }
    } else {
      const auto v = es_odd.eigenvectors().col(lv.index);
      for (int m = 1; m <= nc; ++m) {
        full[nc + m] = v[m - 1] / std::sqrt(2.0);
        full[nc - m] = -v[m - 1] / std::sqrt(2.0);
      }
    }
    // deterministic sign: largest-magnitude component positive
    Eigen::Index imax;
    full.cwiseAbs().maxCoeff(&imax);
    if (full[imax] < 0) full = -full;
    out.vectors.col(static_cast<Eigen::Index>(a)) = full;
  }

  // diagonal MPO of the eigenenergies over the alpha register
  {
    const auto& en = out.energies;
    tci::FunctionOracle oracle(std::vector<size_t>(p.bits_t, 2),
                               [&en](const std::vector<size_t>& s) {
                                 return cplx(en[static_cast<Eigen::Index>(q::decode(s))]);
                               });
    tci::TciReport rep;
    TensorTrain diag = tci::tci_build(oracle, tol, 64, &rep);
    if (!rep.converged)
      throw ConvergenceError("transmon_eigenbasis: energy TCI stalled at rank " +
                             std::to_string(diag.max_bond()));
    out.h_t = q::diagonal_mpo(diag);
  }
  // charge operator in the eigenbasis, [n_t]_{ab} = sum_n psi_a(n) n psi_b(n)
  {
    Eigen::MatrixXd weighted = out.vectors;
    for (int i = 0; i < dim; ++i) weighted.row(i) *= double(i - p.charge_cutoff);
    Eigen::MatrixXd nmat = out.vectors.transpose() * weighted;
    tci::TciReport rep;
    out.n_t = tci::tci_build_2d(
        [&nmat](const std::vector<size_t>& r, const std::vector<size_t>& c) {
          return cplx(nmat(static_cast<Eigen::Index>(q::decode(r)),
                           static_cast<Eigen::Index>(q::decode(c))));
        },
        std::vector<size_t>(p.bits_t, 2), std::vector<size_t>(p.bits_t, 2), tol, 64, &rep);
    if (!rep.converged)
      throw ConvergenceError("transmon_eigenbasis: charge-operator TCI stalled at rank " +
                             std::to_string(out.n_t.max_bond()));
  }
  out.number_op = q::number_mpo(p.bits_t);
  return out;
}

DenseTransmonCavity dense_transmon_cavity(const TransmonParams& p,
                                          const TransmonEigenbasis& basis, size_t bits_c) {
  DenseTransmonCavity d;
  d.dim_t = size_t(1) << p.bits_t;
  d.dim_c = size_t(1) << bits_c;
  const size_t dim = d.dim_t * d.dim_c;
  if (dim > (size_t(1) << 12)) throw DimensionError("dense_transmon_cavity: dimension cap");
  const double omega_r = kTwoPi * p.omega_r;
  const double g = kTwoPi * p.g;

  dense::MatrixXcd a = dense::MatrixXcd::Zero(d.dim_c, d.dim_c);
  for (size_t i = 0; i + 1 < d.dim_c; ++i)
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = std::sqrt(double(i + 1));
  dense::MatrixXcd nt = dense::MatrixXcd::Zero(d.dim_t, d.dim_t);
  for (size_t x = 0; x < d.dim_t; ++x)
    for (size_t y = 0; y < d.dim_t; ++y) {
      double s = 0;
      for (int i = 0; i < basis.vectors.rows(); ++i)
        s += basis.vectors(i, static_cast<Eigen::Index>(x)) * double(i - basis.charge_cutoff) *
             basis.vectors(i, static_cast<Eigen::Index>(y));
      nt(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = s;
    }

  auto kron = [&](const dense::MatrixXcd& t, const dense::MatrixXcd& c) {
    dense::MatrixXcd out = dense::MatrixXcd::Zero(dim, dim);
    for (size_t i = 0; i < d.dim_t; ++i)
      for (size_t j = 0; j < d.dim_t; ++j) {
        const cplx v = t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (v == cplx(0)) continue;
        out.block(static_cast<Eigen::Index>(i * d.dim_c), static_cast<Eigen::Index>(j * d.dim_c),
                  static_cast<Eigen::Index>(d.dim_c), static_cast<Eigen::Index>(d.dim_c)) +=
            v * c;
      }
    return out;
  };
  const dense::MatrixXcd id_t = dense::MatrixXcd::Identity(d.dim_t, d.dim_t);
  const dense::MatrixXcd id_c = dense::MatrixXcd::Identity(d.dim_c, d.dim_c);
  dense::MatrixXcd ht = dense::MatrixXcd::Zero(d.dim_t, d.dim_t);
  for (size_t x = 0; x < d.dim_t; ++x)
    ht(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) =
        basis.energies[static_cast<Eigen::Index>(x)];
  dense::MatrixXcd nc = dense::MatrixXcd::Zero(d.dim_c, d.dim_c);
  for (size_t i = 0; i < d.dim_c; ++i)
    nc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = double(i);

  d.h0 = kron(ht, id_c) + omega_r * kron(id_t, nc) +
         g * kron(nt, cplx(0, -1) * (a - a.adjoint().eval()));
  // transmon occupation diag(alpha)
  dense::MatrixXcd bt = dense::MatrixXcd::Zero(d.dim_t, d.dim_t);
  for (size_t x = 0; x < d.dim_t; ++x)
    bt(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) = double(x);
  d.num_t = kron(bt, id_c);
  d.num_c = kron(id_t, nc);
  d.a_dag = kron(id_t, a.adjoint().eval());
  return d;
}

const BranchEntry& BranchTable::at(size_t i_t, size_t i_c) const {
  for (const auto& e : entries)
    if (e.i_t == i_t && e.i_c == i_c) return e;
  throw DimensionError("branch table: label not found");
}

BranchTable branch_analysis(const dense::MatrixXcd& h0, const dense::MatrixXcd& num_t,
                            const dense::MatrixXcd& num_c, const dense::MatrixXcd& a_dag,
                            size_t dim_t, size_t dim_c) {
  const size_t dim = dim_t * dim_c;
  if (static_cast<size_t>(h0.rows()) != dim) throw DimensionError("branch_analysis: dimensions");
  Eigen::SelfAdjointEigenSolver<dense::MatrixXcd> es(h0);
  const auto& vecs = es.eigenvectors();
  const auto& vals = es.eigenvalues();

  std::vector<bool> labeled(dim, false);
  BranchTable table;
  table.dim_t = dim_t;
  table.dim_c = dim_c;
  // the current head state of each branch, as an eigenvector index
  std::vector<size_t> head(dim_t);

  // anchors: i_c = 0 by maximum overlap with the bare product states
  for (size_t it = 0; it < dim_t; ++it) {
    const size_t bare = it * dim_c;  // |i_t, 0>
    size_t best = 0;
    double best_ov = -1.0;
    for (size_t l = 0; l < dim; ++l) {
      if (labeled[l]) continue;
      const double ov = std::norm(vecs(static_cast<Eigen::Index>(bare),
                                       static_cast<Eigen::Index>(l)));
      if (ov > best_ov) {
        best_ov = ov;
        best = l;
      }
    }
    labeled[best] = true;
    head[it] = best;
    BranchEntry e;
    e.i_t = it;
    e.i_c = 0;
    e.eigen_index = best;
    e.ill_defined = best_ov < 0.5;
    table.entries.push_back(e);
  }
  // ladder i_c -> i_c + 1 via the cavity creation operator
  for (size_t ic = 0; ic + 1 < dim_c; ++ic) {
    for (size_t it = 0; it < dim_t; ++it) {
      dense::VectorXcd target = a_dag * vecs.col(static_cast<Eigen::Index>(head[it]));
      const double tn2 = target.squaredNorm();
      size_t best = 0;
      double best_ov = -1.0;
      for (size_t l = 0; l < dim; ++l) {
        if (labeled[l]) continue;
        const double ov = std::norm(vecs.col(static_cast<Eigen::Index>(l)).dot(target));
        if (ov > best_ov) {
          best_ov = ov;
          best = l;
        }
      }
      labeled[best] = true;
      head[it] = best;
      BranchEntry e;
      e.i_t = it;
      e.i_c = ic + 1;
      e.eigen_index = best;
      e.ill_defined = (tn2 > 0) ? (best_ov / tn2 < 0.5) : true;
      table.entries.push_back(e);
    }
  }
  for (auto& e : table.entries) {
    const auto v = vecs.col(static_cast<Eigen::Index>(e.eigen_index));
    e.n_t = (v.adjoint() * num_t * v)(0, 0).real();
    e.n_c = (v.adjoint() * num_c * v)(0, 0).real();
    e.omega = vals[static_cast<Eigen::Index>(e.eigen_index)];
  }
  std::sort(table.entries.begin(), table.entries.end(), [](const auto& a, const auto& b) {
    return a.i_t != b.i_t ? a.i_t < b.i_t : a.i_c < b.i_c;
  });
  return table;
}

TransmonCavityModel transmon_cavity_model(const TransmonParams& p, double tol) {
  TransmonCavityModel m;
  m.basis = transmon_eigenbasis(p, tol);
  const purified::ModeLayout layout{
      {{p.bits_t, purified::BasisTag::TransmonEigen}, {p.bits_c, purified::BasisTag::Fock}}};
  const TruncationPolicy pol{tol, 0};
  const double omega_r = kTwoPi * p.omega_r;
  const double g = kTwoPi * p.g;
  const double kappa = kTwoPi * p.kappa;
  const double eps_d = kTwoPi * p.epsilon_d;

  MPO a = q::annihilation_mpo(p.bits_c, tol);
  // -i (a - a^dag), Hermitian
  MPO drive_quad = a;
  mpo_scale(drive_quad, cplx(0, -1));
  {
    MPO t = mpo_adjoint(a);
    mpo_scale(t, cplx(0, 1));
    drive_quad = mpo_add(drive_quad, t, pol);
  }

  MPO h0 = purified::chain_operator(layout, {{0, m.basis.h_t}});
  {
    MPO t = purified::chain_operator(layout, {{1, q::number_mpo(p.bits_c)}});
    mpo_scale(t, omega_r);
    h0 = mpo_add(h0, t, pol);
  }
  {
    MPO t = purified::chain_operator(layout, {{0, m.basis.n_t}, {1, drive_quad}});
    mpo_scale(t, g);
    h0 = mpo_add(h0, t, pol);
  }
  MPO h1 = purified::chain_operator(layout, {{1, drive_quad}});

  double omega_d = kTwoPi * p.omega_d;
  if (p.omega_d <= 0.0) {
    // dressed average of the cavity frequency over the two transmon states,
    // from a reduced-cavity dense diagonalization
    const size_t bits_c_eff = std::min<size_t>(4, p.bits_c);
    auto d = dense_transmon_cavity(p, m.basis, bits_c_eff);
    auto table = branch_analysis(d.h0, d.num_t, d.num_c, d.a_dag, d.dim_t, d.dim_c);
    omega_d = 0.5 * ((table.at(0, 1).omega - table.at(0, 0).omega) +
                     (table.at(1, 1).omega - table.at(1, 0).omega));
  }
  m.omega_d_ghz = omega_d / kTwoPi;

  std::vector<MPO> jumps;
  {
    MPO l = purified::chain_operator(layout, {{1, a}});
    mpo_scale(l, std::sqrt(kappa));
    jumps.push_back(std::move(l));
  }
  m.model = lindblad::LindbladModel::make(
      layout, std::move(h0), std::move(h1),
      [eps_d, omega_d](double t) { return eps_d * std::sin(omega_d * t); }, std::move(jumps));
  return m;
}

purified::PurifiedDensityMatrix dressed_initial_state(const TransmonCavityModel& m, size_t i_t) {
  // dressed eigenstate at a reduced cavity register, embedded in the full one
  const auto& layout = m.model.layout;
  const size_t bits_t = layout.modes[0].bits;
  const size_t bits_c = layout.modes[1].bits;
  const size_t bits_c_eff = std::min(bits_c, size_t(12) - bits_t);
  TransmonParams p;  // only sizes matter for the dense ingredients
  p.bits_t = bits_t;
  p.bits_c = bits_c;
  // rebuild dense ingredients from the stored basis at the reduced size
  auto d = [&] {
    TransmonParams q_ = p;
    q_.charge_cutoff = m.basis.charge_cutoff;
    return dense_transmon_cavity(q_, m.basis, bits_c_eff);
  }();
  auto table = branch_analysis(d.h0, d.num_t, d.num_c, d.a_dag, d.dim_t, d.dim_c);
  Eigen::SelfAdjointEigenSolver<dense::MatrixXcd> es(d.h0);
  const auto vec = es.eigenvectors().col(static_cast<Eigen::Index>(table.at(i_t, 0).eigen_index));

  // reduced layout for the dense constructor, then splice |0> bits into the
  // more significant cavity positions
  purified::ModeLayout reduced = layout;
  reduced.modes[1].bits = bits_c_eff;
  purified::PurifiedDensityMatrix small = purified::from_pure_dense(vec, reduced);
  if (bits_c_eff == bits_c) return small;

  purified::PurifiedDensityMatrix out;
  out.layout = layout;
  std::vector<Core3> cores;
  const size_t cav_backbone = reduced.backbone_site(1);
  for (size_t i = 0; i <= cav_backbone; ++i) cores.push_back(small.psi.cores[i]);
  const size_t chi = small.psi.cores[cav_backbone].r;
  for (size_t k = 0; k < bits_c - bits_c_eff; ++k) {
    Core3 zero_bit(chi, 2, chi);
    for (size_t x = 0; x < chi; ++x) zero_bit.at(x, 0, x) = 1.0;
    cores.push_back(std::move(zero_bit));
  }
  for (size_t i = cav_backbone + 1; i < small.psi.num_sites(); ++i)
    cores.push_back(small.psi.cores[i]);
  out.psi = TensorTrain(std::move(cores));
  return out;
}

}  // namespace qtt::models
