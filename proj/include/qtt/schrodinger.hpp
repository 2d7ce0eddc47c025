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

#include <functional>
#include <map>

#include "qtt/tt.hpp"

// Closed-system integrators for i dPsi/dt = H(t) Psi in train form:
// global RK4, global Crank-Nicolson solved by ALS, and 1-site TDVP with a
// fourth-order Magnus average of the time dependence.

namespace qtt::schrodinger {

/// H(t) = H0 + f(t) H1 with the products needed by the Crank-Nicolson and
/// Magnus assemblies precomputed once.
struct TimeDependentHamiltonian {
  MPO h0;
  std::optional<MPO> h1;
  std::function<double(double)> drive;  // f(t), ignored without h1

  // built once by make(): [H0,H1], H0^2, H0 H1 + H1 H0, H1^2
  std::optional<MPO> commutator;
  std::optional<MPO> h0_sq;
  std::optional<MPO> h1_sq;
  std::optional<MPO> anticommutator;

  static TimeDependentHamiltonian make(MPO h0, std::optional<MPO> h1 = {},
                                       std::function<double(double)> drive = {},
                                       const TruncationPolicy& precompute = {1e-12, 0});

  bool time_dependent() const { return h1.has_value(); }
  double f(double t) const { return h1 ? drive(t) : 0.0; }
  std::vector<size_t> dims() const { return h0.col_dims(); }
};

struct StepRecord {
  double t = 0.0;
  size_t max_bond = 1;
  double norm = 0.0;
  double residual = 0.0;  // solver residual where applicable
};

struct IntegratorReport {
  std::vector<StepRecord> steps;
  bool padded = false;   // TDVP seeds grow bonds by zero padding
  size_t pad_floor = 0;
};

enum class Method { Rk4, CrankNicolson, TdvpPlain, TdvpMagnus };

/// One fourth-order Runge-Kutta step, recompressed per stage. Throws on a
/// norm drift above 10% (stiffness).
TensorTrain rk4_step(const TimeDependentHamiltonian& h, const TensorTrain& psi, double t,
                     double dt, const TruncationPolicy& policy);

/// One Crank-Nicolson step with second-order Taylor propagators, solved by
/// ALS seeded with the right-hand side.
TensorTrain crank_nicolson_step(const TimeDependentHamiltonian& h, const TensorTrain& psi,
                                double t, double dt, const TruncationPolicy& policy,
                                AlsReport* report = nullptr);

/// Gauss-point Magnus coefficients: H_Omega = H0 + c_sum H1 + c_comm [H0,H1].
struct MagnusCoefficients {
  double c_sum = 0.0;
  cplx c_comm = 0.0;
  double t1 = 0.0, t2 = 0.0;
};

MagnusCoefficients magnus_average(const TimeDependentHamiltonian& h, double t, double dt);

/// The averaged Hamiltonian assembled as a single MPO by linear combination
/// of the precomputed pieces.
MPO magnus_hamiltonian(const TimeDependentHamiltonian& h, double t, double dt,
                       const TruncationPolicy& policy = {1e-12, 0});

/// One symmetric 1-site TDVP sweep (left-right then right-left, half steps).
/// Rank preserving; local exponentials by Krylov iteration.
TensorTrain tdvp_step(const MPO& h_eff, TensorTrain psi, double dt, double krylov_tol = 1e-12);

struct EvolveOptions {
  size_t tdvp_pad_floor = 8;
  double krylov_tol = 1e-12;
  // called after every recorded step, e.g. to snapshot states
  std::function<void(double, const TensorTrain&)> observer;
};

struct Trajectory {
  std::vector<double> times;
  // per observable name, one value per grid time
  std::map<std::string, std::vector<cplx>> observables;
  IntegratorReport report;
  TensorTrain final_state;
};

/// Integrates over a uniform grid, recording the requested expectation
/// values (normalized by the state norm) at every grid point.
Trajectory evolve(const TimeDependentHamiltonian& h, const TensorTrain& psi0,
                  const std::vector<double>& t_grid, Method method,
                  const TruncationPolicy& policy,
                  const std::vector<std::pair<std::string, MPO>>& observables = {},
                  const EvolveOptions& opts = {});

/// E = 1 - |<a|b>| / (||a|| ||b||).
double overlap_error(const TensorTrain& a, const TensorTrain& b);

/// y ~ exp(coeff * H_eff) x for the effective problems, by Arnoldi iteration
/// on a matrix-free operator. Throws ConvergenceError past `max_vectors`.
std::vector<cplx> krylov_expm_apply(
    const std::function<void(const cplx*, cplx*)>& matvec, const std::vector<cplx>& x,
    cplx coeff, double tol, int max_vectors = 30);

}  // namespace qtt::schrodinger
