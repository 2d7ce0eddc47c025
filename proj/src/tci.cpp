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

#include "qtt/tci.hpp"

#include <algorithm>
#include <limits>
#include <cmath>

#include "qtt/dense.hpp"

namespace qtt::tci {

FunctionOracle::FunctionOracle(std::vector<size_t> dims,
                               std::function<cplx(const std::vector<size_t>&)> f)
    : dims_(std::move(dims)), f_(std::move(f)) {
  if (dims_.empty()) throw DimensionError("oracle needs at least one dimension");
  strides_.resize(dims_.size());
  std::uint64_t s = 1;
  for (size_t i = dims_.size(); i-- > 0;) {
    strides_[i] = s;
    if (dims_[i] != 0 && s > (~0ull) / dims_[i]) throw DimensionError("index space too large");
    s *= dims_[i];
  }
}

cplx FunctionOracle::operator()(const std::vector<size_t>& idx) const {
  std::uint64_t key = 0;
  for (size_t i = 0; i < dims_.size(); ++i) key += strides_[i] * idx[i];
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  ++calls_;
  const cplx v = f_(idx);
  cache_.emplace(key, v);
  return v;
}

namespace {

using Tuple = std::vector<size_t>;

bool lex_less(const Tuple& a, const Tuple& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Equilibrated factorization of a cross matrix with iterative refinement.
// Pivot matrices of smooth functions can span many decades and be badly
// conditioned even though the interpolation itself is benign; refinement
// recovers the digits the plain solve loses.
struct CrossFactor {
  Eigen::VectorXd dr, dc;
  Eigen::ColPivHouseholderQR<dense::MatrixXcd> qr, qrt;
  const dense::MatrixXcd* p;

  explicit CrossFactor(const dense::MatrixXcd& pm) : p(&pm) {
    const Eigen::Index k = pm.rows();
    dr.resize(k);
    dc.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const double m = pm.row(i).cwiseAbs().maxCoeff();
      dr[i] = (m > 0) ? 1.0 / m : 1.0;
    }
    dense::MatrixXcd p1 = dr.asDiagonal() * pm;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double m = p1.col(j).cwiseAbs().maxCoeff();
      dc[j] = (m > 0) ? 1.0 / m : 1.0;
    }
    dense::MatrixXcd p2 = p1 * dc.asDiagonal();
    qr.compute(p2);
    qrt.compute(p2.transpose());
  }

  // one equilibrated solve of X P = T:  X = T Dc P2^{-1} Dr
  dense::MatrixXcd solve_right_once(const dense::MatrixXcd& t) const {
    dense::MatrixXcd y = qrt.solve((t * dc.asDiagonal()).transpose()).transpose();
    return y * dr.asDiagonal();
  }

  // one equilibrated solve of P M = R:  M = Dc P2^{-1} Dr R
  dense::MatrixXcd solve_left_once(const dense::MatrixXcd& r) const {
    return dc.asDiagonal() * qr.solve(dr.asDiagonal() * r);
  }

  dense::MatrixXcd solve_right(const dense::MatrixXcd& t) const {
    dense::MatrixXcd x = solve_right_once(t);
    const double tn = t.norm();
    double prev = std::numeric_limits<double>::max();
    for (int it = 0; it < 6; ++it) {
      dense::MatrixXcd resid = t - x * (*p);
      const double rn = resid.norm();
      if (rn <= 1e-15 * tn || rn >= prev) break;
      prev = rn;
      x += solve_right_once(resid);
    }
    return x;
  }

  dense::MatrixXcd solve_left(const dense::MatrixXcd& r) const {
    dense::MatrixXcd m = solve_left_once(r);
    const double rn0 = r.norm();
    double prev = std::numeric_limits<double>::max();
    for (int it = 0; it < 6; ++it) {
      dense::MatrixXcd resid = r - (*p) * m;
      const double rn = resid.norm();
      if (rn <= 1e-15 * rn0 || rn >= prev) break;
      prev = rn;
      m += solve_left_once(resid);
    }
    return m;
  }
};

dense::MatrixXcd cross_solve(const dense::MatrixXcd& t, const dense::MatrixXcd& p) {
  return CrossFactor(p).solve_right(t);
}

dense::MatrixXcd cross_solve_left(const dense::MatrixXcd& p, const dense::MatrixXcd& r) {
  return CrossFactor(p).solve_left(r);
}

struct Builder {
  const FunctionOracle& f;
  std::vector<size_t> dims;
  size_t L;
  double tol;
  size_t max_rank;
  TciOptions opts;
  double local_factor = 1.0;  // tightened when validation stalls above tol

  // rowPiv[p]: prefixes over sites 0..p; colPiv[p]: suffixes over p+1..L-1
  std::vector<std::vector<Tuple>> rowPiv, colPiv;
  double fmax = 0.0;  // running max |f| over everything evaluated here

  Builder(const FunctionOracle& f_, double tol_, size_t max_rank_, const TciOptions& o)
      : f(f_), dims(f_.dims()), L(dims.size()), tol(tol_), max_rank(max_rank_), opts(o) {
    rowPiv.resize(L - 1);
    colPiv.resize(L - 1);
  }

  cplx call(const Tuple& idx) {
    const cplx v = f(idx);
    fmax = std::max(fmax, std::abs(v));
    return v;
  }

  void seed_pivot(const Tuple& x0) {
    for (size_t p = 0; p + 1 < L; ++p) {
      rowPiv[p] = {Tuple(x0.begin(), x0.begin() + p + 1)};
      colPiv[p] = {Tuple(x0.begin() + p + 1, x0.end())};
    }
  }

  // Plants a full tuple as a cross point on every bond where both halves are
  // new. Nested pivots cannot reach regions separated from the seed by a
  // high-significance bit flip (e.g. a state peaked at 2^{R-1}); feeding the
  // worst validation sample back restores ergodicity.
  size_t inject_global(const Tuple& x) {
    size_t added = 0;
    for (size_t p = 0; p + 1 < L; ++p) {
      if (max_rank != 0 && rank(p) >= max_rank) continue;
      Tuple row(x.begin(), x.begin() + p + 1);
      Tuple col(x.begin() + p + 1, x.end());
      bool row_known = false, col_known = false;
      for (const auto& t : rowPiv[p]) row_known = row_known || (t == row);
      for (const auto& t : colPiv[p]) col_known = col_known || (t == col);
      if (row_known || col_known) continue;
      rowPiv[p].push_back(std::move(row));
      colPiv[p].push_back(std::move(col));
      ++added;
    }
    return added;
  }

  size_t rank(size_t p) const { return rowPiv[p].size(); }

  // full local matrix Pi[(i, s), (s', j)] at bond p
  dense::MatrixXcd build_pi(size_t p, std::vector<Tuple>& row_tuples,
                            std::vector<Tuple>& col_tuples) {
    const std::vector<Tuple> left = (p == 0) ? std::vector<Tuple>{Tuple{}} : rowPiv[p - 1];
    const std::vector<Tuple> right = (p + 2 >= L) ? std::vector<Tuple>{Tuple{}} : colPiv[p + 1];
    const size_t dl = dims[p], dr = dims[p + 1];
    row_tuples.clear();
    col_tuples.clear();
    for (const auto& i : left)
      for (size_t s = 0; s < dl; ++s) {
        Tuple t = i;
        t.push_back(s);
        row_tuples.push_back(std::move(t));
      }
    for (size_t s = 0; s < dr; ++s)
      for (const auto& j : right) {
        Tuple t{s};
        t.insert(t.end(), j.begin(), j.end());
        col_tuples.push_back(std::move(t));
      }
    dense::MatrixXcd pi(row_tuples.size(), col_tuples.size());
    Tuple full(L);
    for (size_t r = 0; r < row_tuples.size(); ++r)
      for (size_t c = 0; c < col_tuples.size(); ++c) {
        full.assign(row_tuples[r].begin(), row_tuples[r].end());
        full.insert(full.end(), col_tuples[c].begin(), col_tuples[c].end());
        pi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = call(full);
      }
    return pi;
  }

  // grow pivots at bond p with full-search ACA on the residual; returns the
  // number of pivots added
  size_t refine_bond(size_t p) {
    std::vector<Tuple> rows, cols;
    dense::MatrixXcd pi = build_pi(p, rows, cols);
    const Eigen::Index m = pi.rows(), n = pi.cols();

    // locate current pivots inside pi
    auto find_row = [&](const Tuple& t) {
      for (size_t r = 0; r < rows.size(); ++r)
        if (rows[r] == t) return static_cast<Eigen::Index>(r);
      throw std::logic_error("pivot row lost its nesting");
    };
    auto find_col = [&](const Tuple& t) {
      for (size_t c = 0; c < cols.size(); ++c)
        if (cols[c] == t) return static_cast<Eigen::Index>(c);
      throw std::logic_error("pivot col lost its nesting");
    };
    std::vector<Eigen::Index> ir, jc;
    for (const auto& t : rowPiv[p]) ir.push_back(find_row(t));
    for (const auto& t : colPiv[p]) jc.push_back(find_col(t));

    // residual of the current cross approximation
    const Eigen::Index k = static_cast<Eigen::Index>(ir.size());
    dense::MatrixXcd pc(m, k), pr(k, n), pp(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      pc.col(a) = pi.col(jc[a]);
      pr.row(a) = pi.row(ir[a]);
      for (Eigen::Index b = 0; b < k; ++b) pp(a, b) = pi(ir[a], jc[b]);
    }
    dense::MatrixXcd resid = pi - pc * cross_solve_left(pp, pr);

    const double scale = std::max(fmax, 1e-300);
    size_t added = 0;
    while (rank(p) < (max_rank == 0 ? static_cast<size_t>(-1) : max_rank)) {
      // full search with lexicographic tie-breaking
      Eigen::Index br = -1, bc = -1;
      double best = 0.0;
      for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
          const double v = std::abs(resid(r, c));
          if (v > best * (1.0 + 1e-12)) {
            best = v;
            br = r;
            bc = c;
          } else if (br >= 0 && v > best * (1.0 - 1e-12)) {
            if (lex_less(rows[r], rows[br]) ||
                (rows[r] == rows[br] && lex_less(cols[c], cols[bc]))) {
              br = r;
              bc = c;
            }
          }
        }
      if (br < 0 || best <= tol * local_factor * scale) break;
      rowPiv[p].push_back(rows[br]);
      colPiv[p].push_back(cols[bc]);
      ++added;
      resid -= (resid.col(bc) / resid(br, bc)) * resid.row(br);
    }
    return added;
  }

  TensorTrain extract() {
    std::vector<Core3> cores;
    cores.reserve(L);
    Tuple full(L);
    for (size_t p = 0; p < L; ++p) {
      const std::vector<Tuple> left = (p == 0) ? std::vector<Tuple>{Tuple{}} : rowPiv[p - 1];
      const std::vector<Tuple> right = (p + 1 >= L) ? std::vector<Tuple>{Tuple{}} : colPiv[p];
      const size_t chi_l = left.size(), d = dims[p], chi_r = right.size();
      dense::MatrixXcd t(chi_l * d, chi_r);
      for (size_t a = 0; a < chi_l; ++a)
        for (size_t s = 0; s < d; ++s)
          for (size_t b = 0; b < chi_r; ++b) {
            full.assign(left[a].begin(), left[a].end());
            full.push_back(s);
            full.insert(full.end(), right[b].begin(), right[b].end());
            t(static_cast<Eigen::Index>(a * d + s), static_cast<Eigen::Index>(b)) = call(full);
          }
      dense::MatrixXcd core;
      if (p + 1 < L) {
        dense::MatrixXcd pp(chi_r, chi_r);
        for (size_t a = 0; a < chi_r; ++a)
          for (size_t b = 0; b < chi_r; ++b) {
            full.assign(rowPiv[p][a].begin(), rowPiv[p][a].end());
            full.insert(full.end(), colPiv[p][b].begin(), colPiv[p][b].end());
            pp(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = call(full);
          }
        core = cross_solve(t, pp);
        // T P^{-1} is exactly a unit row wherever the row tuple is itself a
        // pivot of this bond; enforcing that makes the chain telescope at
        // pivot paths instead of amplifying solve roundoff
        for (size_t k = 0; k < chi_r; ++k) {
          const Tuple& piv = rowPiv[p][k];
          const Tuple pre(piv.begin(), piv.end() - 1);
          const size_t s = piv.back();
          for (size_t a = 0; a < chi_l; ++a)
            if (left[a] == pre) {
              core.row(static_cast<Eigen::Index>(a * d + s)).setZero();
              core(static_cast<Eigen::Index>(a * d + s), static_cast<Eigen::Index>(k)) = 1.0;
            }
        }
      } else {
        core = t;
      }
      Core3 c(chi_l, d, chi_r);
      for (size_t a = 0; a < chi_l; ++a)
        for (size_t s = 0; s < d; ++s)
          for (size_t b = 0; b < chi_r; ++b)
            c.at(a, s, b) = core(static_cast<Eigen::Index>(a * d + s), static_cast<Eigen::Index>(b));
      cores.push_back(std::move(c));
    }
    TensorTrain tt;
    tt.cores = std::move(cores);
    return tt;
  }

  double validate(const TensorTrain& tt, Tuple* worst = nullptr) {
    Rng rng(opts.seed + 1);
    Tuple idx(L);
    double err = 0.0, scale = fmax;
    for (size_t s = 0; s < opts.validation_samples; ++s) {
      for (size_t i = 0; i < L; ++i) idx[i] = rng.below(dims[i]);
      const cplx fv = call(idx);
      scale = std::max(scale, std::abs(fv));
      const double e = std::abs(evaluate(tt, idx) - fv);
      if (e > err) {
        err = e;
        if (worst) *worst = idx;
      }
    }
    return err / std::max(scale, 1e-300);
  }
};

}  // namespace

TensorTrain tci_build(const FunctionOracle& f, double tol, size_t max_rank, TciReport* report,
                      const TciOptions& opts) {
  const auto& dims = f.dims();
  const size_t L = dims.size();
  if (L == 1) {
    Core3 c(1, dims[0], 1);
    std::vector<size_t> idx(1);
    for (size_t s = 0; s < dims[0]; ++s) {
      idx[0] = s;
      c.at(0, s, 0) = f(idx);
    }
    TensorTrain tt;
    tt.cores.push_back(std::move(c));
    if (report) *report = {true, 0.0, 0, f.call_count()};
    return tt;
  }

  Builder b(f, tol, max_rank, opts);

  // starting pivot: the origin, or the strongest of a random probe when the
  // function vanishes there
  Tuple x0(L, 0);
  if (std::abs(b.call(x0)) < 1e-14) {
    Rng rng(opts.seed);
    Tuple best = x0;
    double bmax = std::abs(b.call(x0));
    Tuple idx(L);
    for (int s = 0; s < 256; ++s) {
      for (size_t i = 0; i < L; ++i) idx[i] = rng.below(dims[i]);
      const double v = std::abs(b.call(idx));
      if (v > bmax) {
        bmax = v;
        best = idx;
      }
    }
    x0 = best;
    if (bmax < 1e-300) {
      // the zero function
      std::vector<Core3> cores;
      for (size_t i = 0; i < L; ++i) cores.emplace_back(1, dims[i], 1);
      TensorTrain tt;
      tt.cores = std::move(cores);
      if (report) *report = {true, 0.0, 0, f.call_count()};
      return tt;
    }
  }
  b.seed_pivot(x0);

  TensorTrain tt;
  TciReport rep;
  bool forward = true;
  int stalls = 0;
  int injections = 0;
  for (int hs = 0; hs < opts.max_half_sweeps; ++hs) {
    size_t added = 0;
    if (forward) {
      for (size_t p = 0; p + 1 < L; ++p) added += b.refine_bond(p);
    } else {
      for (size_t p = L - 1; p-- > 0;) added += b.refine_bond(p);
    }
    forward = !forward;
    ++rep.half_sweeps;
    tt = b.extract();
    Tuple worst;
    rep.achieved_error = b.validate(tt, &worst);
    if (rep.achieved_error <= tol) {
      rep.converged = true;
      break;
    }
    if (added == 0) {
      // refinement is stalled; a large validation miss at this point means
      // the nested pivots never saw that region, so plant it directly
      if (!worst.empty() && injections < 16 && rep.achieved_error > 16.0 * tol &&
          b.inject_global(worst) > 0) {
        ++injections;
        continue;
      }
      // otherwise the local threshold is per bond and the accumulated error
      // can sit just above tol; tighten a few times before giving up
      if (++stalls > 3) break;
      b.local_factor *= 0.25;
    }
  }
  rep.calls = f.call_count();
  for (size_t p = 0; p + 1 < L; ++p)
    for (size_t a = 0; a < b.rowPiv[p].size(); ++a) {
      Tuple full = b.rowPiv[p][a];
      full.insert(full.end(), b.colPiv[p][a].begin(), b.colPiv[p][a].end());
      rep.pivot_tuples.push_back(std::move(full));
    }
  if (report) *report = rep;
  return tt;
}

MPO tci_build_2d(
    const std::function<cplx(const std::vector<size_t>&, const std::vector<size_t>&)>& f,
    const std::vector<size_t>& row_dims, const std::vector<size_t>& col_dims, double tol,
    size_t max_rank, TciReport* report, const TciOptions& opts) {
  if (row_dims.size() != col_dims.size())
    throw DimensionError("tci_build_2d: per-site row/col grouping requires equal site counts");
  const size_t L = row_dims.size();
  std::vector<size_t> fused(L);
  for (size_t i = 0; i < L; ++i) fused[i] = row_dims[i] * col_dims[i];
  FunctionOracle oracle(fused, [&, L](const std::vector<size_t>& u) {
    std::vector<size_t> r(L), c(L);
    for (size_t i = 0; i < L; ++i) {
      r[i] = u[i] / col_dims[i];
      c[i] = u[i] % col_dims[i];
    }
    return f(r, c);
  });
  TensorTrain tt = tci_build(oracle, tol, max_rank, report, opts);
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

}  // namespace qtt::tci
