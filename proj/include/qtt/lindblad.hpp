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

#include "qtt/purified.hpp"

// Lindblad time stepping as Kraus maps on the purified state. One step
// applies a finite set of Kraus branches A_i Psi, combines them by matrix
// addition, truncates per budget, and renormalizes the trace.

namespace qtt::lindblad {

/// One Kraus operator as a formal sum of scaled chain MPOs; applying it
/// means one MPO product per term followed by vector additions.
struct OperatorTerm {
  cplx coeff{1.0, 0.0};
  MPO op;
};
using OperatorSum = std::vector<OperatorTerm>;

struct KrausMap {
  std::vector<OperatorSum> operators;  // rho -> sum_i A_i rho A_i^dag
};

struct LindbladModel {
  purified::ModeLayout layout;
  MPO h0;  // Hermitian part, full chain
  std::optional<MPO> h1;
  std::function<double(double)> drive;
  std::vector<MPO> jumps;  // rates absorbed

  // precomputed: H0_eff = H0 - (i/2) sum L^dag L, and the pieces of
  // H_eff(t)^2 = H0_eff^2 + f (H0_eff H1 + H1 H0_eff) + f^2 H1^2
  MPO h0_eff;
  MPO h0_eff_sq;
  std::optional<MPO> heff_cross;
  std::optional<MPO> h1_sq;

  /// H_eff at a frozen drive value, one MPO (h0_eff itself when static).
  MPO heff_at(double f_value, double tol = 1e-12) const;

  static LindbladModel make(purified::ModeLayout layout, MPO h0, std::optional<MPO> h1,
                            std::function<double(double)> drive, std::vector<MPO> jumps,
                            const TruncationPolicy& precompute = {1e-12, 0});

  bool time_dependent() const { return h1.has_value(); }
  double f(double t) const { return h1 ? drive(t) : 0.0; }
};

/// Applies a general Kraus map: per-operator expansion by apply_operator and
/// vector_add, branches combined by matrix_add in declaration order.
purified::PurifiedDensityMatrix apply_kraus(const KrausMap& map,
                                            const purified::PurifiedDensityMatrix& state,
                                            const purified::CompressionBudget& budget);

/// K = U + dt L with U_1 = 1 - i dt H_eff, then renormalization.
/// `trace_pre` reports the pre-normalization trace (1 + O(dt^2)).
purified::PurifiedDensityMatrix first_order_step(const LindbladModel& model,
                                                 const purified::PurifiedDensityMatrix& state,
                                                 double t, double dt,
                                                 const purified::CompressionBudget& budget,
                                                 double* trace_pre = nullptr);

/// K = U' + dt/2 [UL + LU] + dt^2/2 L^2 with
/// U'_1 = 1 - i dt H_eff - dt^2/2 H_eff^2; global error O(dt^2).
purified::PurifiedDensityMatrix second_order_step(const LindbladModel& model,
                                                  const purified::PurifiedDensityMatrix& state,
                                                  double t, double dt,
                                                  const purified::CompressionBudget& budget,
                                                  double* trace_pre = nullptr);

enum class Scheme { Order1, Order2 };

struct LindbladRecord {
  double t = 0.0;
  double trace_pre = 1.0;  // before renormalization
  double purity = 1.0;
  size_t chi_q = 1, chi_e = 1, chi_mu = 1, elements = 0;
};

struct LindbladTrajectory {
  std::vector<double> times;
  std::map<std::string, std::vector<cplx>> observables;
  std::vector<LindbladRecord> records;
  purified::PurifiedDensityMatrix final_state;
  bool completed = true;
  std::string failure;
};

/// Steps over a uniform grid recording expectations (of trace-1 states),
/// purity, pre-normalization trace, and compression telemetry. A step
/// failure terminates with the partial trajectory flagged.
LindbladTrajectory evolve_lindblad(
    const LindbladModel& model, const purified::PurifiedDensityMatrix& psi0,
    const std::vector<double>& t_grid, Scheme scheme, const purified::CompressionBudget& budget,
    const std::vector<std::pair<std::string, MPO>>& observables,
    const std::function<void(double, const purified::PurifiedDensityMatrix&)>& observer = {});

}  // namespace qtt::lindblad
