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
#include <unordered_map>

#include "qtt/tt.hpp"

// Tensor cross interpolation: builds a tensor train for a black-box function
// of index tuples from a polynomial number of evaluations. 2-site scheme,
// accumulative pivots, full search on the local cross matrix.

namespace qtt::tci {

/// Deterministic black-box over index tuples. Evaluations are memoized so
/// repeated pivots cost nothing; call_count() reports true evaluations.
class FunctionOracle {
 public:
  FunctionOracle(std::vector<size_t> dims, std::function<cplx(const std::vector<size_t>&)> f);

  cplx operator()(const std::vector<size_t>& idx) const;
  const std::vector<size_t>& dims() const { return dims_; }
  size_t call_count() const { return calls_; }

 private:
  std::vector<size_t> dims_;
  std::vector<std::uint64_t> strides_;
  std::function<cplx(const std::vector<size_t>&)> f_;
  mutable std::unordered_map<std::uint64_t, cplx> cache_;
  mutable size_t calls_ = 0;
};

struct TciReport {
  bool converged = false;
  double achieved_error = 0.0;  // max |TT - f| / max|f| on the validation sample
  int half_sweeps = 0;
  size_t calls = 0;
  // full index tuples of the accepted cross points, per bond
  std::vector<std::vector<size_t>> pivot_tuples;
};

struct TciOptions {
  std::uint64_t seed = 20260501;  // probe and validation sample
  size_t validation_samples = 1024;
  int max_half_sweeps = 48;
};

/// Builds a TT approximation with |TT(x) - f(x)| <= tol * max|f| on pivots
/// and a held-out sample. If max_rank (0 = unlimited) stops the refinement
/// first, the best effort is returned and the report flags non-convergence.
TensorTrain tci_build(const FunctionOracle& f, double tol, size_t max_rank,
                      TciReport* report = nullptr, const TciOptions& opts = {});

/// TCI over (row, col) index tuples with interleaved (sigma_k, sigma'_k)
/// site grouping; returns the result directly as an MPO.
MPO tci_build_2d(const std::function<cplx(const std::vector<size_t>&, const std::vector<size_t>&)>& f,
                 const std::vector<size_t>& row_dims, const std::vector<size_t>& col_dims,
                 double tol, size_t max_rank, TciReport* report = nullptr,
                 const TciOptions& opts = {});

}  // namespace qtt::tci
