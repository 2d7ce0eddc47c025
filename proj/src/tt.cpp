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

#include "qtt/tt.hpp"

#include <algorithm>
#include <cmath>

#include "qtt/dense.hpp"
#include "qtt/kernels.hpp"

namespace qtt {

namespace {

std::vector<cplx> matmul(const cplx* a, const cplx* b, size_t m, size_t k, size_t n) {
  std::vector<cplx> c(m * n, cplx(0));
  kernels::gemm_acc(a, b, c.data(), m, k, n);
  return c;
}

std::vector<cplx> adj(const cplx* a, size_t m, size_t n) {
  std::vector<cplx> out(m * n);
  kernels::adjoint(a, out.data(), m, n);
  return out;
}

// W (w,s,s',w') -> (s w') x (w s')
std::vector<cplx> perm_w_swp(const Core4& w) {
  std::vector<cplx> out(w.size());
  for (size_t a = 0; a < w.l; ++a)
    for (size_t s = 0; s < w.dr; ++s)
      for (size_t t = 0; t < w.dc; ++t)
        for (size_t b = 0; b < w.r; ++b)
          out[(s * w.r + b) * (w.l * w.dc) + a * w.dc + t] = w.at(a, s, t, b);
  return out;
}

}  // namespace

// ---- TensorTrain / MPO members ----

std::vector<size_t> TensorTrain::physical_dims() const {
  std::vector<size_t> d(cores.size());
  for (size_t i = 0; i < cores.size(); ++i) d[i] = cores[i].d;
  return d;
}

std::vector<size_t> TensorTrain::bond_dims() const {
  std::vector<size_t> b(cores.size() + 1, 1);
  for (size_t i = 0; i < cores.size(); ++i) b[i + 1] = cores[i].r;
  return b;
}

size_t TensorTrain::max_bond() const {
  size_t m = 1;
  for (const auto& c : cores) m = std::max(m, std::max(c.l, c.r));
  return m;
}

size_t TensorTrain::element_count() const {
  size_t n = 0;
  for (const auto& c : cores) n += c.size();
  return n;
}

double TensorTrain::norm() const {
  if (cores.empty()) return 0.0;
  if (center) return std::sqrt(kernels::nrm2_sq(cores[*center].v.data(), cores[*center].size()));
  // QR-canonicalize a copy: stable for nearly cancelling sums, where the
  // quadratic form <t|t> would lose half the digits
  TensorTrain tmp = *this;
  canonicalize(tmp, 0);
  return std::sqrt(kernels::nrm2_sq(tmp.cores[0].v.data(), tmp.cores[0].size()));
}

void TensorTrain::check_valid() const {
  if (cores.empty()) throw DimensionError("empty tensor train");
  if (cores.front().l != 1 || cores.back().r != 1)
    throw DimensionError("edge bonds of a tensor train must be 1");
  for (size_t i = 0; i + 1 < cores.size(); ++i)
    if (cores[i].r != cores[i + 1].l) throw DimensionError("bond mismatch between adjacent cores");
  for (const auto& c : cores)
    if (c.v.size() != c.l * c.d * c.r) throw DimensionError("core buffer size mismatch");
}

std::vector<size_t> MPO::row_dims() const {
  std::vector<size_t> d(cores.size());
  for (size_t i = 0; i < cores.size(); ++i) d[i] = cores[i].dr;
  return d;
}

std::vector<size_t> MPO::col_dims() const {
  std::vector<size_t> d(cores.size());
  for (size_t i = 0; i < cores.size(); ++i) d[i] = cores[i].dc;
  return d;
}

std::vector<size_t> MPO::bond_dims() const {
  std::vector<size_t> b(cores.size() + 1, 1);
  for (size_t i = 0; i < cores.size(); ++i) b[i + 1] = cores[i].r;
  return b;
}

size_t MPO::max_bond() const {
  size_t m = 1;
  for (const auto& c : cores) m = std::max(m, std::max(c.l, c.r));
  return m;
}

void MPO::check_valid() const {
  if (cores.empty()) throw DimensionError("empty MPO");
  if (cores.front().l != 1 || cores.back().r != 1)
    throw DimensionError("edge bonds of an MPO must be 1");
  for (size_t i = 0; i + 1 < cores.size(); ++i)
    if (cores[i].r != cores[i + 1].l) throw DimensionError("bond mismatch between adjacent cores");
}

// ---- constructors ----

TensorTrain product_state(const std::vector<std::vector<cplx>>& site_amps) {
  std::vector<Core3> cores;
  cores.reserve(site_amps.size());
  for (const auto& amps : site_amps) {
    Core3 c(1, amps.size(), 1);
    for (size_t s = 0; s < amps.size(); ++s) c.at(0, s, 0) = amps[s];
    cores.push_back(std::move(c));
  }
  TensorTrain tt(std::move(cores));
  return tt;
}

TensorTrain random_tt(const std::vector<size_t>& dims, size_t bond, std::uint64_t seed) {
  Rng rng(seed);
  const size_t L = dims.size();
  std::vector<size_t> bonds(L + 1, 1);
  size_t acc = 1;
  for (size_t i = 1; i < L; ++i) {
    acc = std::min<size_t>(acc * dims[i - 1], 1u << 20);
    bonds[i] = std::min(bond, acc);
  }
  acc = 1;
  for (size_t i = L; i-- > 1;) {
    acc = std::min<size_t>(acc * dims[i], 1u << 20);
    bonds[i] = std::min(bonds[i], acc);
  }
  std::vector<Core3> cores;
  for (size_t i = 0; i < L; ++i) {
    Core3 c(bonds[i], dims[i], bonds[i + 1]);
    for (auto& x : c.v) x = rng.cnorm();
    cores.push_back(std::move(c));
  }
  return TensorTrain(std::move(cores));
}

MPO identity_mpo(const std::vector<size_t>& dims) {
  std::vector<Core4> cores;
  for (size_t d : dims) {
    Core4 c(1, d, d, 1);
    for (size_t s = 0; s < d; ++s) c.at(0, s, s, 0) = 1.0;
    cores.push_back(std::move(c));
  }
  return MPO(std::move(cores));
}

TensorTrain tt_from_dense(const std::vector<cplx>& amps, const std::vector<size_t>& dims,
                          const TruncationPolicy& policy) {
  size_t total = 1;
  for (size_t d : dims) total *= d;
  if (amps.size() != total) throw DimensionError("tt_from_dense: size mismatch");
  const size_t L = dims.size();
  std::vector<Core3> cores;
  cores.reserve(L);
  std::vector<cplx> m = amps;
  size_t lead = 1;       // current left bond
  size_t rest = total;   // remaining flat dimension including current site
  for (size_t i = 0; i + 1 < L; ++i) {
    const size_t rows = lead * dims[i];
    const size_t cols = rest / dims[i];
    auto svd = dense::svd_truncated(m.data(), rows, cols, policy.rel_tolerance, policy.max_rank);
    Core3 c(lead, dims[i], svd.rank);
    c.v = std::move(svd.u);
    cores.push_back(std::move(c));
    m.assign(svd.rank * cols, cplx(0));
    for (size_t x = 0; x < svd.rank; ++x)
      for (size_t y = 0; y < cols; ++y) m[x * cols + y] = svd.s[x] * svd.vh[x * cols + y];
    lead = svd.rank;
    rest = cols;
  }
  Core3 last(lead, dims[L - 1], 1);
  last.v = std::move(m);
  cores.push_back(std::move(last));
  TensorTrain out(std::move(cores));
  out.center = L - 1;
  return out;
}

MPO mpo_from_dense(const std::vector<cplx>& mat, const std::vector<size_t>& row_dims,
                   const std::vector<size_t>& col_dims, const TruncationPolicy& policy) {
  const size_t L = row_dims.size();
  if (col_dims.size() != L) throw DimensionError("mpo_from_dense: site count mismatch");
  size_t nr = 1, nc = 1;
  for (size_t d : row_dims) nr *= d;
  for (size_t d : col_dims) nc *= d;
  if (mat.size() != nr * nc) throw DimensionError("mpo_from_dense: size mismatch");
  // fuse (s_i, s'_i) per site: walk the digits of row and col indices
  std::vector<size_t> fused(L);
  for (size_t i = 0; i < L; ++i) fused[i] = row_dims[i] * col_dims[i];
  size_t total = nr * nc;
  std::vector<cplx> interleaved(total);
  std::vector<size_t> rdig(L), cdig(L);
  for (size_t r = 0; r < nr; ++r) {
    size_t x = r;
    for (size_t i = L; i-- > 0;) {
      rdig[i] = x % row_dims[i];
      x /= row_dims[i];
    }
    for (size_t c = 0; c < nc; ++c) {
      size_t y = c;
      for (size_t i = L; i-- > 0;) {
        cdig[i] = y % col_dims[i];
        y /= col_dims[i];
      }
      size_t flat = 0;
      for (size_t i = 0; i < L; ++i) flat = flat * fused[i] + (rdig[i] * col_dims[i] + cdig[i]);
      interleaved[flat] = mat[r * nc + c];
    }
  }
  TensorTrain tt = tt_from_dense(interleaved, fused, policy);
  std::vector<Core4> cores;
  cores.reserve(L);
  for (size_t i = 0; i < L; ++i) {
    Core4 c(tt.cores[i].l, row_dims[i], col_dims[i], tt.cores[i].r);
    c.v = std::move(tt.cores[i].v);
    cores.push_back(std::move(c));
  }
  MPO out;
  out.cores = std::move(cores);
  return out;
}

// ---- canonical form ----

namespace {

void left_orthogonalize_site(TensorTrain& tt, size_t i) {
  Core3& c = tt.cores[i];
  std::vector<cplx> q, rfac;
  dense::qr_thin(c.v.data(), c.l * c.d, c.r, q, rfac);
  const size_t rr = std::min(c.l * c.d, c.r);
  const size_t r_old = c.r;
  c.v = std::move(q);
  c.r = rr;
  Core3& nx = tt.cores[i + 1];
  nx.v = matmul(rfac.data(), nx.v.data(), rr, r_old, nx.d * nx.r);
  nx.l = rr;
}

void right_orthogonalize_site(TensorTrain& tt, size_t i) {
  Core3& c = tt.cores[i];
  std::vector<cplx> lfac, q;
  dense::lq_thin(c.v.data(), c.l, c.d * c.r, lfac, q);
  const size_t rr = std::min(c.l, c.d * c.r);
  const size_t l_old = c.l;
  c.v = std::move(q);
  c.l = rr;
  Core3& pv = tt.cores[i - 1];
  pv.v = matmul(pv.v.data(), lfac.data(), pv.l * pv.d, l_old, rr);
  pv.r = rr;
}

}  // namespace

void canonicalize(TensorTrain& tt, size_t center) {
  if (center >= tt.num_sites()) throw DimensionError("canonical center out of range");
  if (tt.center && *tt.center == center) return;
  size_t lo = 0, hi = tt.num_sites() - 1;
  if (tt.center) {
    if (*tt.center < center) {
      for (size_t i = *tt.center; i < center; ++i) left_orthogonalize_site(tt, i);
    } else {
      for (size_t i = *tt.center; i > center; --i) right_orthogonalize_site(tt, i);
    }
    tt.center = center;
    return;
  }
  for (size_t i = lo; i < center; ++i) left_orthogonalize_site(tt, i);
  for (size_t i = hi; i > center; --i) right_orthogonalize_site(tt, i);
  tt.center = center;
}

void truncate_bonds(TensorTrain& tt, const std::vector<TruncationPolicy>& per_bond) {
  const size_t L = tt.num_sites();
  if (per_bond.size() != L) throw DimensionError("truncate_bonds: one policy per bond expected");
  if (L == 1) {
    tt.center = 0;
    return;
  }
  canonicalize(tt, L - 1);
  for (size_t i = L - 1; i > 0; --i) {
    Core3& c = tt.cores[i];
    const TruncationPolicy& policy = per_bond[i];
    auto svd = dense::svd_truncated(c.v.data(), c.l, c.d * c.r, policy.rel_tolerance,
                                    policy.max_rank);
    const size_t rank = svd.rank;
    const size_t l_old = c.l;
    c.v = std::move(svd.vh);
    c.l = rank;
    // carry U * diag(s) into the previous core
    std::vector<cplx> us(l_old * rank);
    for (size_t a = 0; a < l_old; ++a)
      for (size_t b = 0; b < rank; ++b) us[a * rank + b] = svd.u[a * rank + b] * svd.s[b];
    Core3& pv = tt.cores[i - 1];
    pv.v = matmul(pv.v.data(), us.data(), pv.l * pv.d, l_old, rank);
    pv.r = rank;
  }
  tt.center = 0;
}

void truncate(TensorTrain& tt, const TruncationPolicy& policy) {
  truncate_bonds(tt, std::vector<TruncationPolicy>(tt.num_sites(), policy));
}

TensorTrain truncated(TensorTrain tt, const TruncationPolicy& policy) {
  truncate(tt, policy);
  return tt;
}

void pad_bonds(TensorTrain& tt, size_t floor_bond) {
  const size_t L = tt.num_sites();
  if (L < 2) return;
  const auto dims = tt.physical_dims();
  std::vector<size_t> cap(L + 1, 1);
  size_t acc = 1;
  for (size_t i = 1; i < L; ++i) {
    acc = std::min<size_t>(acc * dims[i - 1], 1u << 20);
    cap[i] = acc;
  }
  acc = 1;
  for (size_t i = L; i-- > 1;) {
    acc = std::min<size_t>(acc * dims[i], 1u << 20);
    cap[i] = std::min(cap[i], acc);
  }
  for (size_t bond = 1; bond < L; ++bond) {
    const size_t target = std::min(floor_bond, cap[bond]);
    const size_t cur = tt.cores[bond].l;
    if (cur >= target) continue;
    Core3& lc = tt.cores[bond - 1];
    Core3 nl(lc.l, lc.d, target);
    for (size_t a = 0; a < lc.l; ++a)
      for (size_t s = 0; s < lc.d; ++s)
        for (size_t b = 0; b < lc.r; ++b) nl.at(a, s, b) = lc.at(a, s, b);
    lc = std::move(nl);
    Core3& rc = tt.cores[bond];
    Core3 nr(target, rc.d, rc.r);
    for (size_t a = 0; a < rc.l; ++a)
      for (size_t s = 0; s < rc.d; ++s)
        for (size_t b = 0; b < rc.r; ++b) nr.at(a, s, b) = rc.at(a, s, b);
    rc = std::move(nr);
  }
  tt.center.reset();
}

// ---- algebra ----

void scale(TensorTrain& tt, cplx factor) {
  Core3& c = tt.cores[tt.center ? *tt.center : 0];
  kernels::scal(factor, c.v.data(), c.size());
}

TensorTrain add_exact(const TensorTrain& a, const TensorTrain& b) {
  if (a.physical_dims() != b.physical_dims())
    throw DimensionError("add: physical dimension mismatch");
  const size_t L = a.num_sites();
  if (L == 1) {
    Core3 c = a.cores[0];
    kernels::axpy(1.0, b.cores[0].v.data(), c.v.data(), c.size());
    TensorTrain out;
    out.cores.push_back(std::move(c));
    out.center = 0;
    return out;
  }
  std::vector<Core3> cores;
  cores.reserve(L);
  for (size_t i = 0; i < L; ++i) {
    const Core3& ca = a.cores[i];
    const Core3& cb = b.cores[i];
    const size_t nl = (i == 0) ? 1 : ca.l + cb.l;
    const size_t nr = (i == L - 1) ? 1 : ca.r + cb.r;
    Core3 c(nl, ca.d, nr);
    const size_t lo = (i == 0) ? 0 : ca.l;
    const size_t ro = (i == L - 1) ? 0 : ca.r;
    for (size_t x = 0; x < ca.l; ++x)
      for (size_t s = 0; s < ca.d; ++s)
        for (size_t y = 0; y < ca.r; ++y) c.at(x, s, y) = ca.at(x, s, y);
    for (size_t x = 0; x < cb.l; ++x)
      for (size_t s = 0; s < cb.d; ++s)
        for (size_t y = 0; y < cb.r; ++y) c.at(lo + x, s, ro + y) = cb.at(x, s, y);
    cores.push_back(std::move(c));
  }
  TensorTrain out(std::move(cores));
  return out;
}

TensorTrain add(const TensorTrain& a, const TensorTrain& b, const TruncationPolicy& policy) {
  TensorTrain out = add_exact(a, b);
  truncate(out, policy);
  return out;
}

cplx inner(const TensorTrain& a, const TensorTrain& b) {
  if (a.physical_dims() != b.physical_dims())
    throw DimensionError("inner: physical dimension mismatch");
  std::vector<cplx> e{cplx(1.0)};
  size_t ea = 1, eb = 1;
  std::vector<cplx> out;
  for (size_t i = 0; i < a.num_sites(); ++i) {
    contract::transfer_left(e, ea, eb, a.cores[i], b.cores[i], out);
    e = std::move(out);
    ea = a.cores[i].r;
    eb = b.cores[i].r;
  }
  return e[0];
}

cplx evaluate(const TensorTrain& tt, const std::vector<size_t>& idx) {
  if (idx.size() != tt.num_sites()) throw DimensionError("evaluate: index tuple length mismatch");
  std::vector<cplx> row{cplx(1.0)};
  for (size_t i = 0; i < tt.num_sites(); ++i) {
    const Core3& c = tt.cores[i];
    if (idx[i] >= c.d) throw DimensionError("evaluate: index out of range");
    std::vector<cplx> next(c.r, cplx(0));
    for (size_t a = 0; a < c.l; ++a) {
      const cplx* slice = c.v.data() + (a * c.d + idx[i]) * c.r;
      kernels::axpy(row[a], slice, next.data(), c.r);
    }
    row = std::move(next);
  }
  return row[0];
}

cplx sandwich(const TensorTrain& bra, const MPO& op, const TensorTrain& ket) {
  if (op.col_dims() != ket.physical_dims() || op.row_dims() != bra.physical_dims())
    throw DimensionError("sandwich: dimension mismatch");
  contract::Env e{cplx(1.0)};
  contract::EnvDims ed;
  contract::Env out;
  contract::EnvDims od;
  for (size_t i = 0; i < ket.num_sites(); ++i) {
    contract::op_transfer_left(e, ed, bra.cores[i], op.cores[i], ket.cores[i], out, od);
    e = std::move(out);
    ed = od;
  }
  return e[0];
}

// ---- contraction machinery ----

namespace contract {

void transfer_left(const std::vector<cplx>& e, size_t ea, size_t eb, const Core3& bra,
                   const Core3& ket, std::vector<cplx>& out) {
  // F[(a s), b'] = E[a, b] Ket[b, (s b')]
  auto f = matmul(e.data(), ket.v.data(), ea, eb, ket.d * ket.r);
  auto abra = adj(bra.v.data(), bra.l * bra.d, bra.r);
  out = matmul(abra.data(), f.data(), bra.r, bra.l * bra.d, ket.r);
}

void transfer_right(const std::vector<cplx>& e, size_t ea, size_t eb, const Core3& bra,
                    const Core3& ket, std::vector<cplx>& out) {
  // Et[b', a'] then F[(b s'), a'] = Ket[(b s'), b'] Et
  std::vector<cplx> et(eb * ea);
  for (size_t x = 0; x < ea; ++x)
    for (size_t y = 0; y < eb; ++y) et[y * ea + x] = e[x * eb + y];
  auto f = matmul(ket.v.data(), et.data(), ket.l * ket.d, ket.r, ea);
  // Fp[(s a'), b] from F[b, s', a']
  std::vector<cplx> fp(ket.d * ea * ket.l);
  for (size_t b = 0; b < ket.l; ++b)
    for (size_t s = 0; s < ket.d; ++s)
      for (size_t x = 0; x < ea; ++x) fp[(s * ea + x) * ket.l + b] = f[(b * ket.d + s) * ea + x];
  // Ap[a, (s a')] = conj(Bra[a, s, a'])
  std::vector<cplx> ap(bra.size());
  for (size_t i = 0; i < bra.size(); ++i) ap[i] = std::conj(bra.v[i]);
  out = matmul(ap.data(), fp.data(), bra.l, bra.d * bra.r, ket.l);
}

void op_transfer_left(const Env& e, const EnvDims& ed, const Core3& bra, const Core4& op,
                      const Core3& ket, Env& out, EnvDims& od) {
  const size_t na = ed.a, nw = ed.w, nb = ed.b;
  const size_t dr = op.dr, dc = op.dc, wr = op.r;
  // F[a, w, s', b'] = E[(a w), b] Ket[b, (s' b')]
  auto f = matmul(e.data(), ket.v.data(), na * nw, nb, dc * ket.r);
  // Fp[(w s'), (a b')]
  std::vector<cplx> fp(nw * dc * na * ket.r);
  for (size_t a = 0; a < na; ++a)
    for (size_t w = 0; w < nw; ++w)
      for (size_t t = 0; t < dc; ++t)
        for (size_t b = 0; b < ket.r; ++b)
          fp[(w * dc + t) * (na * ket.r) + a * ket.r + b] =
              f[((a * nw + w) * dc + t) * ket.r + b];
  auto wp = perm_w_swp(op);  // (s w') x (w s')
  auto g0 = matmul(wp.data(), fp.data(), dr * wr, nw * dc, na * ket.r);
  // G1[(a s), (w' b')] from G0[s, w', a, b']
  std::vector<cplx> g1(na * dr * wr * ket.r);
  for (size_t s = 0; s < dr; ++s)
    for (size_t w = 0; w < wr; ++w)
      for (size_t a = 0; a < na; ++a)
        for (size_t b = 0; b < ket.r; ++b)
          g1[(a * dr + s) * (wr * ket.r) + w * ket.r + b] =
              g0[((s * wr + w) * na + a) * ket.r + b];
  auto abra = adj(bra.v.data(), bra.l * bra.d, bra.r);
  out = matmul(abra.data(), g1.data(), bra.r, bra.l * bra.d, wr * ket.r);
  od = {bra.r, wr, ket.r};
}

void op_transfer_right(const Env& e, const EnvDims& ed, const Core3& bra, const Core4& op,
                       const Core3& ket, Env& out, EnvDims& od) {
  const size_t na = ed.a, nw = ed.w, nb = ed.b;
  const size_t wl = op.l, dr = op.dr, dc = op.dc;
  // Et[b', (a' w')]
  std::vector<cplx> et(nb * na * nw);
  for (size_t x = 0; x < na; ++x)
    for (size_t w = 0; w < nw; ++w)
      for (size_t y = 0; y < nb; ++y) et[y * (na * nw) + x * nw + w] = e[(x * nw + w) * nb + y];
  // F[(b s'), (a' w')] = Ket[(b s'), b'] Et
  auto f = matmul(ket.v.data(), et.data(), ket.l * ket.d, ket.r, na * nw);
  // Fp[(s' w'), (a' b)] from F[b, s', a', w']
  std::vector<cplx> fp(dc * nw * na * ket.l);
  for (size_t b = 0; b < ket.l; ++b)
    for (size_t t = 0; t < dc; ++t)
      for (size_t x = 0; x < na; ++x)
        for (size_t w = 0; w < nw; ++w)
          fp[(t * nw + w) * (na * ket.l) + x * ket.l + b] =
              f[((b * dc + t) * na + x) * nw + w];
  // W viewed (w s) x (s' w') is the native layout
  auto g = matmul(op.v.data(), fp.data(), wl * dr, dc * nw, na * ket.l);
  // Gp[(s a'), (w b)] from G[w, s, a', b]
  std::vector<cplx> gp(dr * na * wl * ket.l);
  for (size_t w = 0; w < wl; ++w)
    for (size_t s = 0; s < dr; ++s)
      for (size_t x = 0; x < na; ++x)
        for (size_t b = 0; b < ket.l; ++b)
          gp[(s * na + x) * (wl * ket.l) + w * ket.l + b] =
              g[((w * dr + s) * na + x) * ket.l + b];
  // Ap[a, (s a')] = conj(bra)
  std::vector<cplx> ap(bra.size());
  for (size_t i = 0; i < bra.size(); ++i) ap[i] = std::conj(bra.v[i]);
  out = matmul(ap.data(), gp.data(), bra.l, bra.d * bra.r, wl * ket.l);
  od = {bra.l, wl, ket.l};
}

Core3 mpo_mps_site_core(const Core4& w, const Core3& m) {
  if (w.dc != m.d) throw DimensionError("mpo apply: physical dimension mismatch");
  // Wp[(wl s wr), s'], Mp[s', (ml mr)]
  std::vector<cplx> wp(w.size());
  for (size_t a = 0; a < w.l; ++a)
    for (size_t s = 0; s < w.dr; ++s)
      for (size_t t = 0; t < w.dc; ++t)
        for (size_t b = 0; b < w.r; ++b)
          wp[((a * w.dr + s) * w.r + b) * w.dc + t] = w.at(a, s, t, b);
  std::vector<cplx> mp(m.size());
  for (size_t a = 0; a < m.l; ++a)
    for (size_t t = 0; t < m.d; ++t)
      for (size_t b = 0; b < m.r; ++b) mp[t * (m.l * m.r) + a * m.r + b] = m.at(a, t, b);
  auto p0 = matmul(wp.data(), mp.data(), w.l * w.dr * w.r, w.dc, m.l * m.r);
  // P[(wl ml), s, (wr mr)] from P0[wl, s, wr, ml, mr]
  Core3 p(w.l * m.l, w.dr, w.r * m.r);
  for (size_t a = 0; a < w.l; ++a)
    for (size_t s = 0; s < w.dr; ++s)
      for (size_t b = 0; b < w.r; ++b)
        for (size_t x = 0; x < m.l; ++x)
          for (size_t y = 0; y < m.r; ++y)
            p.at(a * m.l + x, s, b * m.r + y) = p0[(((a * w.dr + s) * w.r + b) * m.l + x) * m.r + y];
  return p;
}

Core4 mpo_mpo_site_core(const Core4& a, const Core4& b) {
  if (a.dc != b.dr) throw DimensionError("mpo product: physical dimension mismatch");
  std::vector<cplx> ap(a.size());
  for (size_t x = 0; x < a.l; ++x)
    for (size_t s = 0; s < a.dr; ++s)
      for (size_t t = 0; t < a.dc; ++t)
        for (size_t y = 0; y < a.r; ++y)
          ap[((x * a.dr + s) * a.r + y) * a.dc + t] = a.at(x, s, t, y);
  std::vector<cplx> bp(b.size());
  for (size_t x = 0; x < b.l; ++x)
    for (size_t t = 0; t < b.dr; ++t)
      for (size_t u = 0; u < b.dc; ++u)
        for (size_t y = 0; y < b.r; ++y)
          bp[t * (b.l * b.dc * b.r) + (x * b.dc + u) * b.r + y] = b.at(x, t, u, y);
  auto p0 = matmul(ap.data(), bp.data(), a.l * a.dr * a.r, a.dc, b.l * b.dc * b.r);
  Core4 p(a.l * b.l, a.dr, b.dc, a.r * b.r);
  for (size_t x = 0; x < a.l; ++x)
    for (size_t s = 0; s < a.dr; ++s)
      for (size_t y = 0; y < a.r; ++y)
        for (size_t u = 0; u < b.l; ++u)
          for (size_t t = 0; t < b.dc; ++t)
            for (size_t z = 0; z < b.r; ++z)
              p.at(x * b.l + u, s, t, y * b.r + z) =
                  p0[((((x * a.dr + s) * a.r + y) * b.l + u) * b.dc + t) * b.r + z];
  return p;
}

void apply_effective_1site(const Env& lenv, const EnvDims& ld, const Core4& w, const Env& renv,
                           const EnvDims& rd, const cplx* x, cplx* y) {
  const size_t lo = ld.a, li = ld.b, lw = ld.w;
  const size_t ro = rd.a, ri = rd.b, rw = rd.w;
  const size_t dr = w.dr, dc = w.dc;
  // t1[(l w), (s' r')] = L[(l w), l'] x[l', (s' r')]
  auto t1 = matmul(lenv.data(), x, lo * lw, li, dc * ri);
  // t2[(w s'), (l r')]
  std::vector<cplx> t2(lw * dc * lo * ri);
  for (size_t l = 0; l < lo; ++l)
    for (size_t ww = 0; ww < lw; ++ww)
      for (size_t t = 0; t < dc; ++t)
        for (size_t r = 0; r < ri; ++r)
          t2[(ww * dc + t) * (lo * ri) + l * ri + r] = t1[((l * lw + ww) * dc + t) * ri + r];
  auto wp = perm_w_swp(w);
  auto t3 = matmul(wp.data(), t2.data(), dr * w.r, lw * dc, lo * ri);
  // t4[(l s), (w' r')] from t3[s, w', l, r']
  std::vector<cplx> t4(lo * dr * w.r * ri);
  for (size_t s = 0; s < dr; ++s)
    for (size_t ww = 0; ww < w.r; ++ww)
      for (size_t l = 0; l < lo; ++l)
        for (size_t r = 0; r < ri; ++r)
          t4[(l * dr + s) * (w.r * ri) + ww * ri + r] = t3[((s * w.r + ww) * lo + l) * ri + r];
  // Rp[(w' r'), r] from R[r, w', r']
  std::vector<cplx> rp(rw * ri * ro);
  for (size_t r = 0; r < ro; ++r)
    for (size_t ww = 0; ww < rw; ++ww)
      for (size_t q = 0; q < ri; ++q) rp[(ww * ri + q) * ro + r] = renv[(r * rw + ww) * ri + q];
  std::fill(y, y + lo * dr * ro, cplx(0));
  kernels::gemm_acc(t4.data(), rp.data(), y, lo * dr, w.r * ri, ro);
}

void apply_effective_0site(const Env& lenv, const EnvDims& ld, const Env& renv, const EnvDims& rd,
                           const cplx* x, cplx* y) {
  const size_t lo = ld.a, li = ld.b, lw = ld.w;
  const size_t ro = rd.a, ri = rd.b;
  // t[(l w), r'] = L[(l w), l'] x[l', r']
  auto t = matmul(lenv.data(), x, lo * lw, li, ri);
  // Rp[(w r'), r]
  std::vector<cplx> rp(lw * ri * ro);
  for (size_t r = 0; r < ro; ++r)
    for (size_t ww = 0; ww < lw; ++ww)
      for (size_t q = 0; q < ri; ++q) rp[(ww * ri + q) * ro + r] = renv[(r * lw + ww) * ri + q];
  std::fill(y, y + lo * ro, cplx(0));
  kernels::gemm_acc(t.data(), rp.data(), y, lo, lw * ri, ro);
}

}  // namespace contract

// ---- MPO <-> TT bridging ----

namespace {

TensorTrain mpo_as_tt(const MPO& op) {
  std::vector<Core3> cores;
  cores.reserve(op.num_sites());
  for (const auto& c : op.cores) {
    Core3 t(c.l, c.dr * c.dc, c.r);
    t.v = c.v;
    cores.push_back(std::move(t));
  }
  TensorTrain tt;
  tt.cores = std::move(cores);
  return tt;
}

MPO tt_as_mpo(TensorTrain&& tt, const std::vector<size_t>& row_dims,
              const std::vector<size_t>& col_dims) {
  std::vector<Core4> cores;
  cores.reserve(tt.num_sites());
  for (size_t i = 0; i < tt.num_sites(); ++i) {
    Core3& t = tt.cores[i];
    Core4 c(t.l, row_dims[i], col_dims[i], t.r);
    c.v = std::move(t.v);
    cores.push_back(std::move(c));
  }
  MPO op;
  op.cores = std::move(cores);
  return op;
}

}  // namespace

void mpo_truncate(MPO& op, const TruncationPolicy& policy) {
  auto rd = op.row_dims();
  auto cd = op.col_dims();
  TensorTrain tt = mpo_as_tt(op);
  truncate(tt, policy);
  op = tt_as_mpo(std::move(tt), rd, cd);
}

MPO mpo_mul(const MPO& a, const MPO& b, const TruncationPolicy& policy) {
  if (a.col_dims() != b.row_dims()) throw DimensionError("mpo_mul: dimension mismatch");
  std::vector<Core4> cores;
  cores.reserve(a.num_sites());
  for (size_t i = 0; i < a.num_sites(); ++i)
    cores.push_back(contract::mpo_mpo_site_core(a.cores[i], b.cores[i]));
  MPO out(std::move(cores));
  mpo_truncate(out, policy);
  return out;
}

MPO mpo_add(const MPO& a, const MPO& b, const TruncationPolicy& policy) {
  if (a.row_dims() != b.row_dims() || a.col_dims() != b.col_dims())
    throw DimensionError("mpo_add: dimension mismatch");
  auto rd = a.row_dims();
  auto cd = a.col_dims();
  TensorTrain sum = add_exact(mpo_as_tt(a), mpo_as_tt(b));
  truncate(sum, policy);
  return tt_as_mpo(std::move(sum), rd, cd);
}

void mpo_scale(MPO& op, cplx factor) {
  kernels::scal(factor, op.cores[0].v.data(), op.cores[0].size());
}

MPO mpo_adjoint(const MPO& op) {
  std::vector<Core4> cores;
  cores.reserve(op.num_sites());
  for (const auto& c : op.cores) {
    Core4 o(c.l, c.dc, c.dr, c.r);
    for (size_t a = 0; a < c.l; ++a)
      for (size_t s = 0; s < c.dc; ++s)
        for (size_t t = 0; t < c.dr; ++t)
          for (size_t b = 0; b < c.r; ++b) o.at(a, s, t, b) = std::conj(c.at(a, t, s, b));
    cores.push_back(std::move(o));
  }
  MPO out;
  out.cores = std::move(cores);
  return out;
}

// ---- apply_mpo ----

namespace {

TensorTrain apply_zipup_nofinish(const MPO& op, const TensorTrain& tt,
                                 const TruncationPolicy& policy) {
  const size_t L = tt.num_sites();
  std::vector<Core3> out;
  out.reserve(L);
  std::vector<cplx> carry{cplx(1.0)};
  size_t rdim = 1, kdim = 1;
  for (size_t i = 0; i < L; ++i) {
    Core3 k = contract::mpo_mps_site_core(op.cores[i], tt.cores[i]);
    auto t = matmul(carry.data(), k.v.data(), rdim, kdim, k.d * k.r);
    if (i == L - 1) {
      Core3 c(rdim, k.d, 1);
      c.v = std::move(t);
      out.push_back(std::move(c));
      break;
    }
    auto svd = dense::svd_truncated(t.data(), rdim * k.d, k.r, policy.rel_tolerance,
                                    policy.max_rank);
    Core3 c(rdim, k.d, svd.rank);
    c.v = std::move(svd.u);
    out.push_back(std::move(c));
    carry.assign(svd.rank * k.r, cplx(0));
    for (size_t x = 0; x < svd.rank; ++x)
      for (size_t y = 0; y < k.r; ++y) carry[x * k.r + y] = svd.s[x] * svd.vh[x * k.r + y];
    rdim = svd.rank;
    kdim = k.r;
  }
  TensorTrain res;
  res.cores = std::move(out);
  res.center = L - 1;
  return res;
}

TensorTrain apply_zipup(const MPO& op, const TensorTrain& tt, const TruncationPolicy& policy) {
  TensorTrain res = apply_zipup_nofinish(op, tt, policy);
  truncate(res, policy);
  return res;
}

// Optimal center core given surrounding environments (bra = x, ket = source).
Core3 fit_project(const contract::Env& lenv, const contract::EnvDims& ld, const Core4& w,
                  const Core3& m, const contract::Env& renv, const contract::EnvDims& rd) {
  Core3 out(ld.a, w.dr, rd.a);
  contract::apply_effective_1site(lenv, ld, w, renv, rd, m.v.data(), out.v.data());
  return out;
}

TensorTrain apply_fit(const MPO& op, const TensorTrain& tt, const TruncationPolicy& policy,
                      ApplyReport* report) {
  TensorTrain x = apply_zipup(op, tt, policy);  // seed, canonical at 0
  const size_t L = tt.num_sites();
  if (L == 1) return x;
  const int max_sweeps = 4;
  const double tol = policy.rel_tolerance > 0 ? policy.rel_tolerance : 1e-14;

  std::vector<contract::Env> lenv(L + 1), renv(L + 1);
  std::vector<contract::EnvDims> ldims(L + 1), rdims(L + 1);
  lenv[0] = {cplx(1.0)};
  renv[L] = {cplx(1.0)};
  for (size_t i = L; i-- > 1;)
    contract::op_transfer_right(renv[i + 1], rdims[i + 1], x.cores[i], op.cores[i], tt.cores[i],
                                renv[i], rdims[i]);

  double prev_norm2 = -1.0;
  bool converged = false;
  int sweeps = 0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    ++sweeps;
    for (size_t i = 0; i < L; ++i) {
      Core3 c = fit_project(lenv[i], ldims[i], op.cores[i], tt.cores[i], renv[i + 1], rdims[i + 1]);
      if (i + 1 < L) {
        std::vector<cplx> q, rfac;
        dense::qr_thin(c.v.data(), c.l * c.d, c.r, q, rfac);
        c.r = std::min(c.l * c.d, c.r);
        c.v = std::move(q);
        x.cores[i] = std::move(c);
        contract::op_transfer_left(lenv[i], ldims[i], x.cores[i], op.cores[i], tt.cores[i],
                                   lenv[i + 1], ldims[i + 1]);
      } else {
        x.cores[i] = std::move(c);
        x.center = L - 1;
      }
    }
    for (size_t i = L; i-- > 0;) {
      Core3 c = fit_project(lenv[i], ldims[i], op.cores[i], tt.cores[i], renv[i + 1], rdims[i + 1]);
      if (i > 0) {
        std::vector<cplx> lfac, q;
        dense::lq_thin(c.v.data(), c.l, c.d * c.r, lfac, q);
        c.l = std::min(c.l, c.d * c.r);
        c.v = std::move(q);
        x.cores[i] = std::move(c);
        contract::op_transfer_right(renv[i + 1], rdims[i + 1], x.cores[i], op.cores[i],
                                    tt.cores[i], renv[i], rdims[i]);
      } else {
        x.cores[i] = std::move(c);
        x.center = 0;
      }
    }
    const double norm2 = kernels::nrm2_sq(x.cores[0].v.data(), x.cores[0].size());
    if (prev_norm2 >= 0.0 && std::abs(norm2 - prev_norm2) <= tol * std::max(norm2, 1e-300)) {
      converged = true;
      break;
    }
    prev_norm2 = norm2;
  }
  if (report) {
    report->converged = converged;
    report->sweeps = sweeps;
    report->residual = 0.0;
    if (!converged) {
      TensorTrain y = apply_zipup(op, tt, {std::min(tol, 1e-12), 0});
      TensorTrain d = y;
      scale(d, -1.0);
      d = add_exact(d, x);
      const double yn = y.norm();
      report->residual = yn > 0 ? d.norm() / yn : d.norm();
    }
  }
  truncate(x, policy);
  return x;
}

}  // namespace

TensorTrain zipup_apply_raw(const MPO& op, const TensorTrain& tt,
                            const TruncationPolicy& policy) {
  if (op.col_dims() != tt.physical_dims())
    throw DimensionError("zipup_apply_raw: dimension mismatch");
  return apply_zipup_nofinish(op, tt, policy);
}

TensorTrain apply_mpo(const MPO& op, const TensorTrain& tt, ApplyMethod method,
                      const TruncationPolicy& policy, ApplyReport* report) {
  if (op.col_dims() != tt.physical_dims()) throw DimensionError("apply_mpo: dimension mismatch");
  if (method == ApplyMethod::Zipup) {
    if (report) *report = {};
    return apply_zipup(op, tt, policy);
  }
  return apply_fit(op, tt, policy, report);
}

// ---- ALS linear solve ----

namespace {

// A_loc[(l s r), (l' s' r')] = sum_{w,w'} L[l,w,l'] W[w,s,s',w'] R[r,w',r']
dense::MatrixXcd assemble_local_operator(const contract::Env& lenv, const contract::EnvDims& ld,
                                         const Core4& w, const contract::Env& renv,
                                         const contract::EnvDims& rd) {
  const size_t lo = ld.a, li = ld.b, lw = ld.w;
  const size_t ro = rd.a, ri = rd.b, rw = rd.w;
  const size_t n_out = lo * w.dr * ro;
  const size_t n_in = li * w.dc * ri;
  dense::MatrixXcd a = dense::MatrixXcd::Zero(n_out, n_in);
  for (size_t ww = 0; ww < lw; ++ww)
    for (size_t wv = 0; wv < rw; ++wv)
      for (size_t s = 0; s < w.dr; ++s)
        for (size_t t = 0; t < w.dc; ++t) {
          const cplx wst = w.at(ww, s, t, wv);
          if (wst == cplx(0)) continue;
          for (size_t l = 0; l < lo; ++l)
            for (size_t lp = 0; lp < li; ++lp) {
              const cplx lv = lenv[(l * lw + ww) * li + lp] * wst;
              if (lv == cplx(0)) continue;
              for (size_t r = 0; r < ro; ++r)
                for (size_t rp = 0; rp < ri; ++rp) {
                  a((l * w.dr + s) * ro + r, (lp * w.dc + t) * ri + rp) +=
                      lv * renv[(r * rw + wv) * ri + rp];
                }
            }
        }
  return a;
}

dense::VectorXcd assemble_local_rhs(const std::vector<cplx>& lb, size_t lo, size_t lbi,
                                    const Core3& b, const std::vector<cplx>& rb, size_t ro,
                                    size_t rbi) {
  // t[(l s), br] = Lb[l, bl] B[bl, (s br)] ; out[(l s r)] = t[(l s), br] Rb[r, br]^T
  auto t = matmul(lb.data(), b.v.data(), lo, lbi, b.d * b.r);
  std::vector<cplx> rbt(rbi * ro);
  for (size_t r = 0; r < ro; ++r)
    for (size_t q = 0; q < rbi; ++q) rbt[q * ro + r] = rb[r * rbi + q];
  auto out = matmul(t.data(), rbt.data(), lo * b.d, b.r, ro);
  dense::VectorXcd v(static_cast<Eigen::Index>(out.size()));
  for (size_t i = 0; i < out.size(); ++i) v[static_cast<Eigen::Index>(i)] = out[i];
  return v;
}

}  // namespace

TensorTrain als_linear_solve(const MPO& a, const TensorTrain& b, const TensorTrain& x0,
                             const TruncationPolicy& policy, AlsReport* report) {
  if (a.col_dims() != b.physical_dims() || a.row_dims() != b.physical_dims())
    throw DimensionError("als_linear_solve: operator must be square on the train dims");
  if (x0.physical_dims() != b.physical_dims())
    throw DimensionError("als_linear_solve: x0 dimension mismatch");
  const size_t L = b.num_sites();
  const int max_sweeps = 10;
  TensorTrain x = x0;
  canonicalize(x, 0);
  const double bnorm = b.norm();

  AlsReport rep;
  std::vector<contract::Env> lenv(L + 1), renv(L + 1);
  std::vector<contract::EnvDims> ld(L + 1), rd(L + 1);
  std::vector<std::vector<cplx>> lb(L + 1), rb(L + 1);
  lenv[0] = {cplx(1.0)};
  renv[L] = {cplx(1.0)};
  lb[0] = {cplx(1.0)};
  rb[L] = {cplx(1.0)};
  for (size_t i = L; i-- > 1;) {
    contract::op_transfer_right(renv[i + 1], rd[i + 1], x.cores[i], a.cores[i], x.cores[i],
                                renv[i], rd[i]);
    contract::transfer_right(rb[i + 1], x.cores[i].r, b.cores[i].r, x.cores[i], b.cores[i],
                             rb[i]);
  }

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    ++rep.sweeps;
    for (size_t i = 0; i < L; ++i) {
      auto aloc = assemble_local_operator(lenv[i], ld[i], a.cores[i], renv[i + 1], rd[i + 1]);
      auto bloc = assemble_local_rhs(lb[i], ld[i].a, (i == 0) ? 1 : b.cores[i - 1].r, b.cores[i],
                                     rb[i + 1], rd[i + 1].a, (i + 1 == L) ? 1 : b.cores[i].r);
      bool regularized = false;
      auto xloc = dense::solve_regularized(aloc, bloc, 1e-12, regularized);
      rep.regularized = rep.regularized || regularized;
      Core3 c(ld[i].a, b.cores[i].d, rd[i + 1].a);
      for (size_t j = 0; j < c.size(); ++j) c.v[j] = xloc[static_cast<Eigen::Index>(j)];
      if (i + 1 < L) {
        std::vector<cplx> q, rfac;
        dense::qr_thin(c.v.data(), c.l * c.d, c.r, q, rfac);
        c.r = std::min(c.l * c.d, c.r);
        c.v = std::move(q);
        x.cores[i] = std::move(c);
        contract::op_transfer_left(lenv[i], ld[i], x.cores[i], a.cores[i], x.cores[i],
                                   lenv[i + 1], ld[i + 1]);
        contract::transfer_left(lb[i], x.cores[i].l, (i == 0) ? 1 : b.cores[i - 1].r, x.cores[i],
                                b.cores[i], lb[i + 1]);
      } else {
        x.cores[i] = std::move(c);
        x.center = L - 1;
      }
    }
    for (size_t i = L; i-- > 0;) {
      auto aloc = assemble_local_operator(lenv[i], ld[i], a.cores[i], renv[i + 1], rd[i + 1]);
      auto bloc = assemble_local_rhs(lb[i], ld[i].a, (i == 0) ? 1 : b.cores[i - 1].r, b.cores[i],
                                     rb[i + 1], rd[i + 1].a, (i + 1 == L) ? 1 : b.cores[i].r);
      bool regularized = false;
      auto xloc = dense::solve_regularized(aloc, bloc, 1e-12, regularized);
      rep.regularized = rep.regularized || regularized;
      Core3 c(ld[i].a, b.cores[i].d, rd[i + 1].a);
      for (size_t j = 0; j < c.size(); ++j) c.v[j] = xloc[static_cast<Eigen::Index>(j)];
      if (i > 0) {
        std::vector<cplx> lfac, q;
        dense::lq_thin(c.v.data(), c.l, c.d * c.r, lfac, q);
        c.l = std::min(c.l, c.d * c.r);
        c.v = std::move(q);
        x.cores[i] = std::move(c);
        contract::op_transfer_right(renv[i + 1], rd[i + 1], x.cores[i], a.cores[i], x.cores[i],
                                    renv[i], rd[i]);
        contract::transfer_right(rb[i + 1], x.cores[i].r, (i + 1 == L) ? 1 : b.cores[i].r,
                                 x.cores[i], b.cores[i], rb[i]);
      } else {
        x.cores[i] = std::move(c);
        x.center = 0;
      }
    }
    // true residual ||Ax - b|| / ||b||
    TensorTrain ax = apply_mpo(a, x, ApplyMethod::Zipup, {1e-13, 0});
    scale(ax, -1.0);
    TensorTrain diff = add_exact(ax, b);
    rep.residual = bnorm > 0 ? diff.norm() / bnorm : diff.norm();
    if (rep.residual <= policy.rel_tolerance) {
      rep.converged = true;
      break;
    }
  }
  if (report) *report = rep;
  return x;
}

}  // namespace qtt
