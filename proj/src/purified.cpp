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

#include "qtt/purified.hpp"

#include <cmath>
#include <fstream>

#include "qtt/kernels.hpp"
#include "qtt/serialize.hpp"

namespace qtt::purified {

size_t ModeLayout::total_bits() const {
  size_t n = 0;
  for (const auto& m : modes) n += m.bits;
  return n;
}

size_t ModeLayout::backbone_site(size_t mode) const {
  if (mode >= modes.size()) throw DimensionError("mode index out of range");
  size_t site = 0;
  for (size_t a = 0; a < mode; ++a) site += 1 + modes[a].bits;
  return site;
}

bool ModeLayout::bond_is_backbone(size_t bond) const {
  // bond i sits left of site i; bonds entering a backbone site or the
  // purification site carry chi_e
  if (bond == 0 || bond >= num_sites()) return false;
  if (bond == mu_site()) return true;
  for (size_t a = 0; a < modes.size(); ++a)
    if (bond == backbone_site(a)) return true;
  return false;
}

double PurifiedDensityMatrix::trace() const {
  const double n = psi.norm();
  return n * n;
}

void PurifiedDensityMatrix::renormalize() {
  const double tr = trace();
  if (tr <= 0.0) throw ConvergenceError("renormalize: trace collapsed");
  scale(psi, 1.0 / std::sqrt(tr));
}

size_t PurifiedDensityMatrix::max_chi_q() const {
  size_t m = 1;
  const auto bonds = psi.bond_dims();
  for (size_t b = 1; b < bonds.size() - 1; ++b)
    if (!layout.bond_is_backbone(b)) m = std::max(m, bonds[b]);
  return m;
}

size_t PurifiedDensityMatrix::max_chi_e() const {
  size_t m = 1;
  const auto bonds = psi.bond_dims();
  for (size_t b = 1; b < bonds.size() - 1; ++b)
    if (layout.bond_is_backbone(b)) m = std::max(m, bonds[b]);
  return m;
}

dense::MatrixXcd PurifiedDensityMatrix::gram() const {
  const size_t L = psi.num_sites();
  std::vector<cplx> e{cplx(1.0)};
  size_t dim = 1;
  std::vector<cplx> out;
  for (size_t i = 0; i + 1 < L; ++i) {
    contract::transfer_left(e, dim, dim, psi.cores[i], psi.cores[i], out);
    e = std::move(out);
    dim = psi.cores[i].r;
  }
  const Core3& c = psi.cores.back();
  dense::MatrixXcd g = dense::MatrixXcd::Zero(c.d, c.d);
  for (size_t mu = 0; mu < c.d; ++mu)
    for (size_t nu = 0; nu < c.d; ++nu) {
      cplx s = 0;
      for (size_t a = 0; a < dim; ++a)
        for (size_t b = 0; b < dim; ++b)
          s += std::conj(c.at(a, mu, 0)) * e[a * dim + b] * c.at(b, nu, 0);
      g(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) = s;
    }
  return g;
}

double PurifiedDensityMatrix::purity() const {
  const auto g = gram();
  const double tr = g.trace().real();
  if (tr <= 0.0) return 0.0;
  return g.squaredNorm() / (tr * tr);
}

PurifiedDensityMatrix from_pure_product(const std::vector<TensorTrain>& states,
                                        const ModeLayout& layout, bool* renormalized) {
  if (states.size() != layout.num_modes())
    throw DimensionError("from_pure_product: one state per mode expected");
  if (renormalized) *renormalized = false;
  std::vector<Core3> cores;
  cores.reserve(layout.num_sites());
  for (size_t a = 0; a < states.size(); ++a) {
    if (states[a].num_sites() != layout.modes[a].bits)
      throw DimensionError("from_pure_product: state does not match the mode register");
    TensorTrain st = states[a];
    const double n = st.norm();
    if (std::abs(n - 1.0) > 1e-12) {
      if (n <= 0.0) throw DimensionError("from_pure_product: zero state");
      scale(st, 1.0 / n);
      if (renormalized) *renormalized = true;
    }
    Core3 backbone(1, 1, 1);
    backbone.at(0, 0, 0) = 1.0;
    // absorb the incoming mode bond so backbone bonds stay 1
    canonicalize(st, 0);
    cores.push_back(std::move(backbone));
    for (auto& c : st.cores) cores.push_back(std::move(c));
  }
  Core3 mu(1, 1, 1);
  mu.at(0, 0, 0) = 1.0;
  cores.push_back(std::move(mu));
  PurifiedDensityMatrix out;
  out.psi = TensorTrain(std::move(cores));
  out.psi.center.reset();
  out.layout = layout;
  return out;
}

PurifiedDensityMatrix from_pure_dense(const dense::VectorXcd& amps, const ModeLayout& layout) {
  const size_t bits = layout.total_bits();
  if (bits > 12) throw DimensionError("from_pure_dense: capped at 12 total bits");
  if (static_cast<size_t>(amps.size()) != (size_t(1) << bits))
    throw DimensionError("from_pure_dense: amplitude count mismatch");
  std::vector<cplx> flat(amps.data(), amps.data() + amps.size());
  const double nrm = std::sqrt(kernels::nrm2_sq(flat.data(), flat.size()));
  if (nrm <= 0.0) throw DimensionError("from_pure_dense: zero state");
  kernels::scal(1.0 / nrm, flat.data(), flat.size());
  TensorTrain bits_tt = tt_from_dense(flat, std::vector<size_t>(bits, 2));
  canonicalize(bits_tt, bits - 1);
  // splice in the dimension-1 backbone sites (bond-passing identities) and
  // the trivial purification site
  std::vector<Core3> cores;
  size_t next_bit = 0;
  for (const auto& m : layout.modes) {
    const size_t chi = (next_bit == 0) ? 1 : bits_tt.cores[next_bit].l;
    Core3 backbone(chi, 1, chi);
    for (size_t a = 0; a < chi; ++a) backbone.at(a, 0, a) = 1.0;
    cores.push_back(std::move(backbone));
    for (size_t k = 0; k < m.bits; ++k) cores.push_back(bits_tt.cores[next_bit + k]);
    next_bit += m.bits;
  }
  Core3 mu(1, 1, 1);
  mu.at(0, 0, 0) = 1.0;
  cores.push_back(std::move(mu));
  PurifiedDensityMatrix out;
  out.psi = TensorTrain(std::move(cores));
  out.layout = layout;
  return out;
}

namespace {

std::vector<TruncationPolicy> budget_policies(const ModeLayout& layout,
                                              const CompressionBudget& budget, bool quantics_pass) {
  std::vector<TruncationPolicy> pol(layout.num_sites(), TruncationPolicy::lossless());
  for (size_t b = 1; b < layout.num_sites(); ++b) {
    const bool backbone = layout.bond_is_backbone(b);
    if (quantics_pass && !backbone) pol[b] = {budget.tol_q, budget.max_q};
    if (!quantics_pass && backbone) pol[b] = {budget.tol_e, budget.max_e};
  }
  return pol;
}

}  // namespace

void truncate_bond_budget(PurifiedDensityMatrix& state, const CompressionBudget& budget) {
  // bond sweeps only: they rotate bond bases but never touch the
  // purification index, so mu-column semantics survive for vector addition
  truncate_bonds(state.psi, budget_policies(state.layout, budget, true));
  truncate_bonds(state.psi, budget_policies(state.layout, budget, false));
}

void truncate_budget(PurifiedDensityMatrix& state, const CompressionBudget& budget) {
  truncate_bond_budget(state, budget);
  state = truncate_purity(std::move(state), budget);
}

namespace {

// a uniform uncapped budget lets one plain sweep do the work of the two
// role-resolved passes
bool uniform_bonds(const CompressionBudget& b) {
  return b.tol_q == b.tol_e && b.max_q == 0 && b.max_e == 0;
}

}  // namespace

PurifiedDensityMatrix vector_add(const PurifiedDensityMatrix& a, const PurifiedDensityMatrix& b,
                                 const CompressionBudget& budget) {
  if (!(a.layout == b.layout)) throw DimensionError("vector_add: layout mismatch");
  if (a.mu_dim() != b.mu_dim())
    throw DimensionError("vector_add: purification dimensions must match");
  PurifiedDensityMatrix out;
  out.layout = a.layout;
  out.psi = add_exact(a.psi, b.psi);
  if (uniform_bonds(budget))
    truncate(out.psi, {budget.tol_q, 0});
  else
    truncate_bond_budget(out, budget);
  return out;
}

namespace {

TensorTrain pad_mu_dim(const TensorTrain& tt, size_t mu_total, size_t offset) {
  TensorTrain out = tt;
  const Core3& c = tt.cores.back();
  Core3 nc(c.l, mu_total, 1);
  for (size_t a = 0; a < c.l; ++a)
    for (size_t mu = 0; mu < c.d; ++mu) nc.at(a, offset + mu, 0) = c.at(a, mu, 0);
  out.cores.back() = std::move(nc);
  out.center.reset();
  return out;
}

}  // namespace

PurifiedDensityMatrix matrix_add(const PurifiedDensityMatrix& a, const PurifiedDensityMatrix& b,
                                 const CompressionBudget& budget) {
  if (!(a.layout == b.layout)) throw DimensionError("matrix_add: layout mismatch");
  const size_t mu = a.mu_dim() + b.mu_dim();
  TensorTrain ap = pad_mu_dim(a.psi, mu, 0);
  TensorTrain bp = pad_mu_dim(b.psi, mu, a.mu_dim());
  PurifiedDensityMatrix out;
  out.layout = a.layout;
  out.psi = add_exact(ap, bp);
  truncate_budget(out, budget);
  return out;
}

MPO chain_operator(const ModeLayout& layout, const std::map<size_t, MPO>& per_mode) {
  std::vector<Core4> cores;
  cores.reserve(layout.num_sites() - 1);
  for (size_t a = 0; a < layout.num_modes(); ++a) {
    Core4 backbone(1, 1, 1, 1);
    backbone.at(0, 0, 0, 0) = 1.0;
    cores.push_back(std::move(backbone));
    auto it = per_mode.find(a);
    if (it == per_mode.end()) {
      for (size_t k = 0; k < layout.modes[a].bits; ++k) {
        Core4 id(1, 2, 2, 1);
        id.at(0, 0, 0, 0) = 1.0;
        id.at(0, 1, 1, 0) = 1.0;
        cores.push_back(std::move(id));
      }
      continue;
    }
    const MPO& op = it->second;
    if (op.num_sites() != layout.modes[a].bits)
      throw DimensionError("chain_operator: operator does not match the mode register");
    for (const auto& c : op.cores) cores.push_back(c);
  }
  MPO out;
  out.cores = std::move(cores);
  out.check_valid();
  return out;
}

namespace {

MPO with_mu_identity(const MPO& chain_op, size_t mu) {
  MPO out = chain_op;
  Core4 id(1, mu, mu, 1);
  for (size_t m = 0; m < mu; ++m) id.at(0, m, m, 0) = 1.0;
  out.cores.push_back(std::move(id));
  return out;
}

}  // namespace

PurifiedDensityMatrix apply_operator(const MPO& chain_op, const PurifiedDensityMatrix& state,
                                     const CompressionBudget& budget) {
  if (chain_op.num_sites() != state.layout.num_sites() - 1)
    throw DimensionError("apply_operator: operator must cover the physical chain");
  MPO full = with_mu_identity(chain_op, state.mu_dim());
  PurifiedDensityMatrix out;
  out.layout = state.layout;
  const double tol = std::min(budget.tol_q, budget.tol_e);
  out.psi = apply_mpo(full, state.psi, ApplyMethod::Zipup, {tol, 0});
  if (!uniform_bonds(budget)) truncate_bond_budget(out, budget);
  return out;
}

PurifiedDensityMatrix apply_operator_raw(const MPO& chain_op,
                                         const PurifiedDensityMatrix& state, double tol) {
  if (chain_op.num_sites() != state.layout.num_sites() - 1)
    throw DimensionError("apply_operator_raw: operator must cover the physical chain");
  MPO full = with_mu_identity(chain_op, state.mu_dim());
  PurifiedDensityMatrix out;
  out.layout = state.layout;
  out.psi = zipup_apply_raw(full, state.psi, {tol, 0});
  return out;
}

namespace {

// n-way block concatenation of trains with matching physical dims;
// coefficients are folded into the first core of each block
TensorTrain block_concat(const std::vector<std::pair<cplx, const TensorTrain*>>& terms) {
  const size_t L = terms.front().second->num_sites();
  std::vector<Core3> cores;
  cores.reserve(L);
  for (size_t i = 0; i < L; ++i) {
    size_t nl = 0, nr = 0;
    const size_t d = terms.front().second->cores[i].d;
    for (const auto& [c, tt] : terms) {
      nl += tt->cores[i].l;
      nr += tt->cores[i].r;
    }
    if (i == 0) nl = 1;
    if (i + 1 == L) nr = 1;
    Core3 out(nl, d, nr);
    size_t lo = 0, ro = 0;
    for (const auto& [coeff, tt] : terms) {
      const Core3& c = tt->cores[i];
      const cplx f = (i == 0) ? coeff : cplx(1.0);
      for (size_t a = 0; a < c.l; ++a)
        for (size_t s = 0; s < c.d; ++s)
          for (size_t b = 0; b < c.r; ++b)
            out.at((i == 0) ? 0 : lo + a, s, (i + 1 == L) ? 0 : ro + b) += f * c.at(a, s, b);
      lo += c.l;
      ro += c.r;
    }
    cores.push_back(std::move(out));
  }
  TensorTrain out(std::move(cores));
  return out;
}

}  // namespace

PurifiedDensityMatrix vector_combine(
    const std::vector<std::pair<cplx, const PurifiedDensityMatrix*>>& terms,
    const CompressionBudget& budget) {
  if (terms.empty()) throw DimensionError("vector_combine: no terms");
  std::vector<std::pair<cplx, const TensorTrain*>> tts;
  for (const auto& [c, st] : terms) {
    if (!(st->layout == terms.front().second->layout) ||
        st->mu_dim() != terms.front().second->mu_dim())
      throw DimensionError("vector_combine: layout or purification mismatch");
    tts.emplace_back(c, &st->psi);
  }
  PurifiedDensityMatrix out;
  out.layout = terms.front().second->layout;
  out.psi = block_concat(tts);
  if (uniform_bonds(budget))
    truncate(out.psi, {budget.tol_q, 0});
  else
    truncate_bond_budget(out, budget);
  return out;
}

PurifiedDensityMatrix matrix_combine(const std::vector<const PurifiedDensityMatrix*>& states,
                                     const CompressionBudget& budget) {
  if (states.empty()) throw DimensionError("matrix_combine: no states");
  size_t mu_total = 0;
  for (const auto* st : states) {
    if (!(st->layout == states.front()->layout))
      throw DimensionError("matrix_combine: layout mismatch");
    mu_total += st->mu_dim();
  }
  std::vector<TensorTrain> padded;
  padded.reserve(states.size());
  size_t offset = 0;
  for (const auto* st : states) {
    padded.push_back(pad_mu_dim(st->psi, mu_total, offset));
    offset += st->mu_dim();
  }
  std::vector<std::pair<cplx, const TensorTrain*>> tts;
  for (const auto& tt : padded) tts.emplace_back(cplx(1.0), &tt);
  PurifiedDensityMatrix out;
  out.layout = states.front()->layout;
  out.psi = block_concat(tts);
  truncate_budget(out, budget);
  return out;
}

cplx expectation(const PurifiedDensityMatrix& state, const MPO& chain_op) {
  if (chain_op.num_sites() != state.layout.num_sites() - 1)
    throw DimensionError("expectation: operator must cover the physical chain");
  MPO full = with_mu_identity(chain_op, state.mu_dim());
  return sandwich(state.psi, full, state.psi);
}

PurifiedDensityMatrix truncate_purity(PurifiedDensityMatrix state,
                                      const CompressionBudget& budget) {
  canonicalize(state.psi, state.layout.mu_site());
  Core3& c = state.psi.cores.back();
  // center core as (bond x mu); dropping small singular values here is an
  // eigenvalue truncation of rho, so positivity survives
  auto svd = dense::svd_truncated(c.v.data(), c.l, c.d, budget.tol_mu, budget.max_mu);
  Core3 nc(c.l, svd.rank, 1);
  for (size_t a = 0; a < c.l; ++a)
    for (size_t k = 0; k < svd.rank; ++k) nc.at(a, k, 0) = svd.u[a * svd.rank + k] * svd.s[k];
  state.psi.cores.back() = std::move(nc);
  state.psi.center = state.layout.mu_site();
  return state;
}

dense::MatrixXcd reduced_density_matrix(const PurifiedDensityMatrix& state, size_t mode) {
  const size_t bits = state.layout.modes.at(mode).bits;
  const size_t dim = size_t(1) << bits;
  if (dim > 4096) throw DimensionError("reduced_density_matrix: mode register too large");
  TensorTrain tt = state.psi;
  const size_t first = state.layout.first_bit_site(mode);
  canonicalize(tt, first);
  // contract the block cores with open physical legs
  std::vector<cplx> block = tt.cores[first].v;  // (a0, 2, b)
  size_t a0 = tt.cores[first].l;
  size_t nn = 2;
  size_t right = tt.cores[first].r;
  for (size_t k = 1; k < bits; ++k) {
    const Core3& c = tt.cores[first + k];
    std::vector<cplx> next((a0 * nn) * c.d * c.r, cplx(0));
    kernels::gemm_acc(block.data(), c.v.data(), next.data(), a0 * nn, right, c.d * c.r);
    block = std::move(next);
    nn *= c.d;
    right = c.r;
  }
  // rho[n, n'] = sum_{a0, b} B[a0, n, b] conj(B[a0, n', b])
  dense::MatrixXcd bm(dim, a0 * right);
  for (size_t a = 0; a < a0; ++a)
    for (size_t n = 0; n < nn; ++n)
      for (size_t b = 0; b < right; ++b)
        bm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(a * right + b)) =
            block[(a * nn + n) * right + b];
  return bm * bm.adjoint();
}

dense::MatrixXcd dense_psi(const PurifiedDensityMatrix& state) {
  if (state.layout.total_bits() > 12)
    throw DimensionError("dense_psi: capped at 12 total bits");
  std::vector<cplx> acc{cplx(1.0)};
  size_t rows = 1, bond = 1;
  const size_t L = state.psi.num_sites();
  for (size_t i = 0; i + 1 < L; ++i) {
    const Core3& c = state.psi.cores[i];
    std::vector<cplx> next(rows * c.d * c.r, cplx(0));
    kernels::gemm_acc(acc.data(), c.v.data(), next.data(), rows, bond, c.d * c.r);
    acc = std::move(next);
    rows *= c.d;
    bond = c.r;
  }
  const Core3& mu = state.psi.cores.back();
  dense::MatrixXcd out = dense::MatrixXcd::Zero(rows, mu.d);
  for (size_t n = 0; n < rows; ++n)
    for (size_t m = 0; m < mu.d; ++m) {
      cplx s = 0;
      for (size_t b = 0; b < bond; ++b) s += acc[n * bond + b] * mu.at(b, m, 0);
      out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = s;
    }
  return out;
}

dense::MatrixXcd dense_rho(const PurifiedDensityMatrix& state) {
  const auto psi = dense_psi(state);
  return psi * psi.adjoint();
}

void save_state(std::ostream& os, const PurifiedDensityMatrix& state) {
  io::write_u64(os, state.layout.num_modes());
  for (const auto& m : state.layout.modes) {
    io::write_u64(os, m.bits);
    io::write_u64(os, static_cast<std::uint64_t>(m.basis));
  }
  io::write_u64(os, state.layout.mu_site());
  io::save_tt(os, state.psi);
}

PurifiedDensityMatrix load_state(std::istream& is) {
  PurifiedDensityMatrix out;
  const std::uint64_t modes = io::read_u64(is);
  for (std::uint64_t a = 0; a < modes; ++a) {
    ModeInfo m;
    m.bits = io::read_u64(is);
    m.basis = static_cast<BasisTag>(io::read_u64(is));
    out.layout.modes.push_back(m);
  }
  const std::uint64_t mu_pos = io::read_u64(is);
  if (mu_pos != out.layout.mu_site())
    throw std::runtime_error("snapshot: purification position mismatch");
  out.psi = io::load_tt(is);
  if (out.psi.num_sites() != out.layout.num_sites())
    throw std::runtime_error("snapshot: site count mismatch");
  return out;
}

void save_state(const std::string& path, const PurifiedDensityMatrix& state) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  save_state(f, state);
}

PurifiedDensityMatrix load_state(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return load_state(f);
}

}  // namespace qtt::purified
