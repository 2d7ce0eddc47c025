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

#include "qtt/lindblad.hpp"
#include "qtt/schrodinger.hpp"

// Concrete physical models: the driven Kerr oscillator benchmark, the
// two-mode cat qubit with its Z gate, and the transmon-cavity readout system
// built in the transmon eigenbasis. The cat and Kerr Hamiltonians are in
// their rotating frames; the transmon model is in the lab frame with an
// explicit sin(omega_d t) drive.

namespace qtt::models {

// ---- driven Kerr oscillator ----

struct KerrParams {
  double omega0 = 1.0;
  double kerr = 1.0 / 25.0;
  double alpha0 = 4.0;
  // f(t) = a1 cos(w1 t) + a2 cos(w2 t), two incommensurate tones
  double drive_a1 = 2.0 / 100.0;
  double drive_w1 = 1.4142135623730951;  // sqrt(2)
  double drive_a2 = 2.0 * 3.141592653589793 / 100.0;
  double drive_w2 = 1.7320508075688772;  // sqrt(3)
  size_t bits = 8;

  double f(double t) const;
};

struct KerrModel {
  schrodinger::TimeDependentHamiltonian h;
  TensorTrain psi0;
};

/// H0 = omega0 n + K/2 n(n-1) (exact diagonal), H1 = a^2 + (a^dag)^2.
KerrModel kerr_model(const KerrParams& p, double tol = 1e-12);

/// Scalar reference i da/dt = omega0 a + 2 f(t) conj(a) + K |a|^2 a,
/// integrated by RK4 with `substeps` per grid interval. Exact when K = 0.
std::vector<cplx> semiclassical_kerr(const KerrParams& p, const std::vector<double>& t_grid,
                                     int substeps = 10);

// ---- cat qubit ----

struct CatParams {
  double g2 = 1.0;
  double kappa_b = 10.0;
  double kappa_a = 0.0;
  double kappa_phi = 0.0;   // optional dephasing sqrt(kappa_phi) a^dag a
  double epsilon_d = 4.0;   // = |alpha|^2 g2
  double epsilon_z = 0.04;  // paper value: (1/10) 4 g2^2 / kappa_b
  double theta = 3.141592653589793;
  size_t bits_a = 4;
  size_t bits_b = 4;

  double alpha() const;                 // stabilized amplitude, -sqrt(eps_d/g2)
  double gate_time() const;             // T_Z = theta / (4 |alpha| eps_Z)
  double adiabaticity() const;          // 8 |alpha| g2 / kappa_b, << 1 wanted
  double predicted_pz() const;          // p_ph + p_buf error budget
};

/// Two-mode Lindblad model: H = g2 a^dag^2 b + h.c. + eps_d (b + b^dag)
/// + eps_z (a + a^dag), jumps {sqrt(kb) b, sqrt(ka) a, sqrt(kphi) a^dag a}.
/// Rejects registers with 2^bits_a < 3 |alpha|^2.
lindblad::LindbladModel cat_model(const CatParams& p, double tol = 1e-12);

/// |alpha sign> x |0> as a purified state (sign = +1 or -1).
purified::PurifiedDensityMatrix cat_coherent_state(const CatParams& p, int sign,
                                                   double tol = 1e-12);

/// Even cat (|alpha> + |-alpha>)/norm on the memory, vacuum buffer.
purified::PurifiedDensityMatrix cat_plus_state(const CatParams& p, double tol = 1e-12);

/// p_Z = 1 - <C_target| rho_a |C_target> with the theta-rotated cat target.
double z_gate_error(const CatParams& p, const purified::PurifiedDensityMatrix& final_state);

// ---- transmon-cavity readout ----

struct TransmonParams {
  // linear frequencies in GHz; angular factors applied internally
  double ec = 0.280;
  double ej_over_ec = 50.0;
  double omega_r = 7.5;
  double g = 0.250;
  double kappa = 0.020;
  double epsilon_d = 0.280;
  double omega_d = 0.0;  // 0: use the dressed average of the cavity frequency
  int charge_cutoff = 500;
  size_t bits_t = 5;
  size_t bits_c = 10;
};

struct TransmonEigenbasis {
  Eigen::VectorXd energies;  // angular (rad/ns), lowest 2^bits_t states
  Eigen::MatrixXd vectors;   // charge-basis eigenvectors, one column per state
  MPO h_t;                   // diagonal MPO of the energies over the alpha bits
  MPO n_t;                   // charge operator in the eigenbasis
  MPO number_op;             // diag(alpha), the transmon occupation
  int charge_cutoff = 0;

  /// Transmon frequency (epsilon_1 - epsilon_0) / 2 pi in GHz.
  double omega01_ghz() const;
};

/// Diagonalizes 4 E_C n^2 - E_J cos(phi) in the charge basis with |n| <=
/// cutoff, keeps the lowest 2^bits_t states, and TCI-builds the eigenbasis
/// MPOs (quantics ranks stay below 10).
TransmonEigenbasis transmon_eigenbasis(const TransmonParams& p, double tol = 1e-10);

struct TransmonCavityModel {
  lindblad::LindbladModel model;
  TransmonEigenbasis basis;
  double omega_d_ghz = 0.0;
};

/// Lab-frame model over (transmon eigenbasis bits, cavity Fock bits):
/// H0 = H_t + omega_r a^dag a - i g n_t (a - a^dag),
/// H1 = -i (a - a^dag) with f(t) = eps_d sin(omega_d t), jump sqrt(kappa) a.
TransmonCavityModel transmon_cavity_model(const TransmonParams& p, double tol = 1e-10);

/// Product dressed state |i_t, i_c = 0> of the undriven Hamiltonian as a
/// purified state at the model's register sizes.
purified::PurifiedDensityMatrix dressed_initial_state(const TransmonCavityModel& m, size_t i_t);

// ---- branch analysis ----

struct BranchEntry {
  size_t i_t = 0, i_c = 0;
  size_t eigen_index = 0;
  double n_t = 0.0, n_c = 0.0;
  double omega = 0.0;
  bool ill_defined = false;  // winning overlap below 1/2
};

struct BranchTable {
  size_t dim_t = 0, dim_c = 0;
  std::vector<BranchEntry> entries;  // ordered by (i_t, i_c)

  const BranchEntry& at(size_t i_t, size_t i_c) const;
};

/// Labels the eigenstates of the undriven coupled Hamiltonian by iterative
/// maximum-overlap laddering with the cavity creation operator.
BranchTable branch_analysis(const dense::MatrixXcd& h0, const dense::MatrixXcd& num_t,
                            const dense::MatrixXcd& num_c, const dense::MatrixXcd& a_dag,
                            size_t dim_t, size_t dim_c);

/// Dense ingredients of the undriven transmon-cavity Hamiltonian at reduced
/// cavity size (for branch analysis); dim_t * dim_c <= 2^12.
struct DenseTransmonCavity {
  dense::MatrixXcd h0, num_t, num_c, a_dag;
  size_t dim_t = 0, dim_c = 0;
};
DenseTransmonCavity dense_transmon_cavity(const TransmonParams& p,
                                          const TransmonEigenbasis& basis, size_t bits_c);

}  // namespace qtt::models
