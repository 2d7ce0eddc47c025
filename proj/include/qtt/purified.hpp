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

#include <iosfwd>
#include <map>

#include "qtt/dense.hpp"
#include "qtt/tt.hpp"

// Three-level compressed density matrix: rho = Psi Psi^dag is stored as the
// purification Psi only, a comb of per-mode backbone cores and quantics
// chains. The comb is flattened to one train whose sites are, per mode, a
// dimension-1 backbone site followed by the mode's bits (most significant
// first), with one purification site of physical dimension chi_mu at the
// right end. Inter-mode bonds carry chi_e, bit-chain bonds carry chi_q, and
// rho is positive semidefinite by construction.

namespace qtt::purified {

enum class BasisTag : std::uint8_t { Fock = 0, TransmonEigen = 1 };

struct ModeInfo {
  size_t bits = 1;
  BasisTag basis = BasisTag::Fock;
  bool operator==(const ModeInfo&) const = default;
};

struct ModeLayout {
  std::vector<ModeInfo> modes;

  size_t num_modes() const { return modes.size(); }
  size_t total_bits() const;
  /// backbone sites + bit sites + the purification site
  size_t num_sites() const { return total_bits() + num_modes() + 1; }
  size_t backbone_site(size_t mode) const;
  size_t first_bit_site(size_t mode) const { return backbone_site(mode) + 1; }
  size_t mu_site() const { return num_sites() - 1; }
  /// true if the bond entering `site` from the left carries inter-mode
  /// entanglement (chi_e); bit-chain bonds carry chi_q
  bool bond_is_backbone(size_t bond) const;
  bool operator==(const ModeLayout&) const = default;
};

struct CompressionBudget {
  double tol_q = 1e-8, tol_e = 1e-8, tol_mu = 1e-8;
  size_t max_q = 0, max_e = 0, max_mu = 0;  // 0 = uncapped

  static CompressionBudget uniform(double tol, size_t cap = 0) {
    return {tol, tol, tol, cap, cap, cap};
  }
};

class PurifiedDensityMatrix {
 public:
  TensorTrain psi;
  ModeLayout layout;

  size_t mu_dim() const { return psi.cores.back().d; }
  /// Tr(rho) = squared 2-norm of the comb.
  double trace() const;
  void renormalize();

  size_t max_chi_q() const;
  size_t max_chi_e() const;
  size_t element_count() const { return psi.element_count(); }

  /// Gram matrix G = Psi^dag Psi over the purification index.
  dense::MatrixXcd gram() const;
  /// Tr(rho^2) / Tr(rho)^2 = ||G||_F^2 / tr(G)^2.
  double purity() const;
};

/// chi_mu = chi_e = 1 comb from one normalized train per mode. Unnormalized
/// inputs are normalized; `renormalized` reports that this happened.
PurifiedDensityMatrix from_pure_product(const std::vector<TensorTrain>& states,
                                        const ModeLayout& layout, bool* renormalized = nullptr);

/// chi_mu = 1 comb from a dense pure vector over the full register
/// (test-scale fixture, capped at 12 total bits).
PurifiedDensityMatrix from_pure_dense(const dense::VectorXcd& amps, const ModeLayout& layout);

/// Psi_a + Psi_b for identical layouts and identical chi_mu.
PurifiedDensityMatrix vector_add(const PurifiedDensityMatrix& a, const PurifiedDensityMatrix& b,
                                 const CompressionBudget& budget);

/// rho_a + rho_b: chi_mu grows additively, then the budget re-truncates.
PurifiedDensityMatrix matrix_add(const PurifiedDensityMatrix& a, const PurifiedDensityMatrix& b,
                                 const CompressionBudget& budget);

/// Full-chain operator (all sites except the purification one) assembled
/// from per-mode MPOs acting on the modes' bit sites, identity elsewhere.
MPO chain_operator(const ModeLayout& layout, const std::map<size_t, MPO>& per_mode);

/// rho -> A rho A^dag realized on the kept half only.
PurifiedDensityMatrix apply_operator(const MPO& chain_op, const PurifiedDensityMatrix& state,
                                     const CompressionBudget& budget);

/// Same product without the final canonicalization; bonds stay bounded by
/// `tol` through the zip-up sweep. Building block for fused additions.
PurifiedDensityMatrix apply_operator_raw(const MPO& chain_op,
                                         const PurifiedDensityMatrix& state, double tol);

/// sum_k coeff_k Psi_k as one block concatenation and one truncation sweep.
PurifiedDensityMatrix vector_combine(const std::vector<std::pair<cplx, const PurifiedDensityMatrix*>>& terms,
                                     const CompressionBudget& budget);

/// rho_1 + ... + rho_n as one block concatenation over the purification
/// index and one budget truncation.
PurifiedDensityMatrix matrix_combine(const std::vector<const PurifiedDensityMatrix*>& states,
                                     const CompressionBudget& budget);

/// Tr(O rho), one comb contraction; not normalized by the trace.
cplx expectation(const PurifiedDensityMatrix& state, const MPO& chain_op);

/// Discards the smallest singular values on the purification index.
PurifiedDensityMatrix truncate_purity(PurifiedDensityMatrix state,
                                      const CompressionBudget& budget);

/// Budget truncation along all three axes: quantics bonds, then backbone
/// bonds, then the purification index.
void truncate_budget(PurifiedDensityMatrix& state, const CompressionBudget& budget);

/// Bond axes only (quantics then backbone); preserves the purification
/// index and its column semantics.
void truncate_bond_budget(PurifiedDensityMatrix& state, const CompressionBudget& budget);

/// Partial trace down to one mode; dense, capped at 2^12 states.
dense::MatrixXcd reduced_density_matrix(const PurifiedDensityMatrix& state, size_t mode);

/// Dense Psi (physical x mu) and rho = Psi Psi^dag; test-scale helpers,
/// hard-capped at 12 total bits.
dense::MatrixXcd dense_psi(const PurifiedDensityMatrix& state);
dense::MatrixXcd dense_rho(const PurifiedDensityMatrix& state);

void save_state(std::ostream& os, const PurifiedDensityMatrix& state);
PurifiedDensityMatrix load_state(std::istream& is);
void save_state(const std::string& path, const PurifiedDensityMatrix& state);
PurifiedDensityMatrix load_state(const std::string& path);

}  // namespace qtt::purified
