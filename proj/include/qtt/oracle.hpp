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

#include "qtt/dense.hpp"
#include "qtt/tt.hpp"

// Dense brute-force references. Everything here is ground truth for the
// compressed code paths and is deliberately independent of them: plain RK4
// on full vectors/matrices, hard dimension caps.

namespace qtt::oracle {

inline constexpr size_t kMaxStateDim = size_t(1) << 13;
inline constexpr size_t kMaxSchrodingerDim = size_t(1) << 12;
inline constexpr size_t kMaxLindbladDim = size_t(1) << 10;

/// Exact contraction of a train to a flat vector (index 0 most significant).
dense::VectorXcd tt_to_dense(const TensorTrain& tt);

/// Exact contraction of an MPO to its dense matrix.
dense::MatrixXcd mpo_to_dense(const MPO& op);

/// Full-vector RK4 reference for i dpsi/dt = H(t) psi, integrating each grid
/// interval with `substeps` internal steps. Returns psi at every grid time.
std::vector<dense::VectorXcd> dense_schrodinger(const std::function<dense::MatrixXcd(double)>& h,
                                                const dense::VectorXcd& psi0,
                                                const std::vector<double>& t_grid,
                                                int substeps = 100);

struct DenseLindbladModel {
  std::function<dense::MatrixXcd(double)> h;
  std::vector<dense::MatrixXcd> jumps;  // rates absorbed
};

/// RK4 on the full Lindblad right-hand side.
std::vector<dense::MatrixXcd> dense_lindblad(const DenseLindbladModel& model,
                                             const dense::MatrixXcd& rho0,
                                             const std::vector<double>& t_grid,
                                             int substeps = 100);

/// 0.5 * || a - b ||_1 (trace norm of the difference / 2).
double trace_distance(const dense::MatrixXcd& a, const dense::MatrixXcd& b);

}  // namespace qtt::oracle
