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

#include <optional>

#include "qtt/common.hpp"

namespace qtt {

/// Rank-revealing truncation rule: at every cut, drop the smallest singular
/// values whose summed squares stay below rel_tolerance^2 times the total,
/// and never exceed max_rank (0 = unlimited).
struct TruncationPolicy {
  double rel_tolerance = 1e-8;
  size_t max_rank = 0;

  static TruncationPolicy lossless() { return {0.0, 0}; }
  static TruncationPolicy exact(double tol = 1e-14) { return {tol, 0}; }
};

/// 3-index tensor-train core, row-major (left bond, physical, right bond).
struct Core3 {
  size_t l = 1, d = 1, r = 1;
  std::vector<cplx> v;

  Core3() : v(1, cplx(0)) {}
  Core3(size_t l_, size_t d_, size_t r_) : l(l_), d(d_), r(r_), v(l_ * d_ * r_, cplx(0)) {}

  cplx& at(size_t a, size_t s, size_t b) { return v[(a * d + s) * r + b]; }
  const cplx& at(size_t a, size_t s, size_t b) const { return v[(a * d + s) * r + b]; }
  size_t size() const { return v.size(); }
};

/// 4-index MPO core, row-major (left bond, row physical, col physical, right bond).
struct Core4 {
  size_t l = 1, dr = 1, dc = 1, r = 1;
  std::vector<cplx> v;

  Core4() : v(1, cplx(0)) {}
  Core4(size_t l_, size_t dr_, size_t dc_, size_t r_)
      : l(l_), dr(dr_), dc(dc_), r(r_), v(l_ * dr_ * dc_ * r_, cplx(0)) {}

  cplx& at(size_t a, size_t s, size_t t, size_t b) { return v[((a * dr + s) * dc + t) * r + b]; }
  const cplx& at(size_t a, size_t s, size_t t, size_t b) const {
    return v[((a * dr + s) * dc + t) * r + b];
  }
  size_t size() const { return v.size(); }
};

/// Tensor train (MPS) over an ordered chain of physical indices. Site 0
/// carries the most significant index of a quantics register. Values are
/// immutable by convention: operations return new trains.
class TensorTrain {
 public:
  std::vector<Core3> cores;
  std::optional<size_t> center;  // canonical center, when known

  TensorTrain() = default;
  explicit TensorTrain(std::vector<Core3> cs) : cores(std::move(cs)) { check_valid(); }

  size_t num_sites() const { return cores.size(); }
  std::vector<size_t> physical_dims() const;
  /// Bond dimensions, length num_sites()+1 with [0] = [L] = 1.
  std::vector<size_t> bond_dims() const;
  size_t max_bond() const;
  size_t element_count() const;
  double norm() const;
  void check_valid() const;
};

/// Matrix product operator with per-site (row, col) physical dimensions.
class MPO {
 public:
  std::vector<Core4> cores;

  MPO() = default;
  explicit MPO(std::vector<Core4> cs) : cores(std::move(cs)) { check_valid(); }

  size_t num_sites() const { return cores.size(); }
  std::vector<size_t> row_dims() const;
  std::vector<size_t> col_dims() const;
  std::vector<size_t> bond_dims() const;
  size_t max_bond() const;
  void check_valid() const;
};

// ---- construction helpers ----

/// Product state from per-site amplitude vectors (all bonds 1).
TensorTrain product_state(const std::vector<std::vector<cplx>>& site_amps);

/// Random train with given physical dims and uniform interior bond dimension
/// (clipped to the representable maximum). Deterministic in `seed`.
TensorTrain random_tt(const std::vector<size_t>& dims, size_t bond, std::uint64_t seed);

MPO identity_mpo(const std::vector<size_t>& dims);

/// Exact successive-SVD factorization of a dense tensor (index 0 most
/// significant). Intended for small fixtures; size = product of dims.
TensorTrain tt_from_dense(const std::vector<cplx>& amps, const std::vector<size_t>& dims,
                          const TruncationPolicy& policy = TruncationPolicy::lossless());

/// Same for an operator given as a dense (prod row_dims) x (prod col_dims)
/// row-major matrix.
MPO mpo_from_dense(const std::vector<cplx>& mat, const std::vector<size_t>& row_dims,
                   const std::vector<size_t>& col_dims,
                   const TruncationPolicy& policy = TruncationPolicy::lossless());

// ---- canonical form and truncation ----

/// Puts the train in mixed-canonical form with the given center site.
/// The represented tensor is unchanged to machine precision.
void canonicalize(TensorTrain& tt, size_t center);

/// Sweeping SVD truncation; output is canonicalized at site 0.
void truncate(TensorTrain& tt, const TruncationPolicy& policy);
TensorTrain truncated(TensorTrain tt, const TruncationPolicy& policy);

/// Same sweep with one policy per bond; per_bond[i] rules the bond between
/// cores i-1 and i (indices 1 .. num_sites()-1).
void truncate_bonds(TensorTrain& tt, const std::vector<TruncationPolicy>& per_bond);

/// Grows interior bonds to at least `floor_bond` (clipped to the
/// representable maximum) by zero padding; canonical form is dropped.
void pad_bonds(TensorTrain& tt, size_t floor_bond);

// ---- algebra ----

void scale(TensorTrain& tt, cplx factor);

/// a + b without compression; interior bonds add.
TensorTrain add_exact(const TensorTrain& a, const TensorTrain& b);
TensorTrain add(const TensorTrain& a, const TensorTrain& b, const TruncationPolicy& policy);

/// <a|b> = sum_n conj(a_n) b_n.
cplx inner(const TensorTrain& a, const TensorTrain& b);

/// Single amplitude at an index tuple.
cplx evaluate(const TensorTrain& tt, const std::vector<size_t>& idx);

/// <bra|op|ket> without forming op|ket>.
cplx sandwich(const TensorTrain& bra, const MPO& op, const TensorTrain& ket);

enum class ApplyMethod { Zipup, Fit };

struct ApplyReport {
  bool converged = true;
  int sweeps = 0;
  double residual = 0.0;  // relative residual, filled when fit stops early
};

/// op * tt. Zipup compresses on the fly left-to-right; Fit refines the
/// zipup seed by alternating single-site least squares (at most 4 sweeps).
TensorTrain apply_mpo(const MPO& op, const TensorTrain& tt, ApplyMethod method,
                      const TruncationPolicy& policy, ApplyReport* report = nullptr);

/// Single left-to-right zip-up pass without the final canonicalization
/// sweep; bonds are already tolerance-bounded, center is the last site.
TensorTrain zipup_apply_raw(const MPO& op, const TensorTrain& tt, const TruncationPolicy& policy);

MPO mpo_mul(const MPO& a, const MPO& b, const TruncationPolicy& policy);
MPO mpo_add(const MPO& a, const MPO& b, const TruncationPolicy& policy);
void mpo_scale(MPO& op, cplx factor);
MPO mpo_adjoint(const MPO& op);
void mpo_truncate(MPO& op, const TruncationPolicy& policy);

struct AlsReport {
  bool converged = false;
  int sweeps = 0;
  double residual = 0.0;     // ||Ax - b|| / ||b||
  bool regularized = false;  // a local problem needed the ridge
};

/// Solves A x = b by single-site alternating least squares (Galerkin
/// projection), warm-started from x0. Stops when the relative residual
/// reaches policy.rel_tolerance or after 10 sweeps.
TensorTrain als_linear_solve(const MPO& a, const TensorTrain& b, const TensorTrain& x0,
                             const TruncationPolicy& policy, AlsReport* report = nullptr);

// ---- internal contraction machinery, shared with the integrators ----
namespace contract {

/// Operator transfer environment, row-major (bra bond, mpo bond, ket bond).
using Env = std::vector<cplx>;

struct EnvDims {
  size_t a = 1, w = 1, b = 1;
};

/// E' = step of <bra| op |ket> from the left across one site.
void op_transfer_left(const Env& e, const EnvDims& ed, const Core3& bra, const Core4& op,
                      const Core3& ket, Env& out, EnvDims& od);

/// Mirror step from the right.
void op_transfer_right(const Env& e, const EnvDims& ed, const Core3& bra, const Core4& op,
                       const Core3& ket, Env& out, EnvDims& od);

/// Plain <bra|ket> transfer steps (no operator), env (bra bond, ket bond).
void transfer_left(const std::vector<cplx>& e, size_t ea, size_t eb, const Core3& bra,
                   const Core3& ket, std::vector<cplx>& out);
void transfer_right(const std::vector<cplx>& e, size_t ea, size_t eb, const Core3& bra,
                    const Core3& ket, std::vector<cplx>& out);

/// Fused MPO*MPS site core: (wl*ml, d_row, wr*mr).
Core3 mpo_mps_site_core(const Core4& w, const Core3& m);

/// Fused MPO*MPO site core: (al*bl, d_row(a), d_col(b), ar*br).
Core4 mpo_mpo_site_core(const Core4& a, const Core4& b);

/// y = H_eff x for the effective 1-site problem given by (L, W, R).
/// x and y are (l, d, r) row-major with l = L.a, r = R.a.
void apply_effective_1site(const Env& lenv, const EnvDims& ld, const Core4& w, const Env& renv,
                           const EnvDims& rd, const cplx* x, cplx* y);

/// y = K_eff x for the 0-site problem given by (L, R).
void apply_effective_0site(const Env& lenv, const EnvDims& ld, const Env& renv, const EnvDims& rd,
                           const cplx* x, cplx* y);

}  // namespace contract

}  // namespace qtt
