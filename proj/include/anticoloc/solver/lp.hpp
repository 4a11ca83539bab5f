// Copyright 2026 The anticoloc Authors
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

// Dense bounded dual simplex for LP relaxations.
//
// Rows are turned into logicals, A x - s = 0 with the row bounds on s. A
// missing row bound is replaced by the row's activity bound over the
// structural box, so every column is boxed. Any basis is then made dual
// feasible by moving nonbasic columns to the bound their reduced cost asks
// for, which is what lets branch-and-bound re-solve children from the
// parent's basis without a phase one.
//
// Costs are perturbed while iterating (all-zero costs on most columns make
// the dual highly degenerate); the perturbation is removed at the end and
// the few remaining infeasibilities are cleaned up with the true costs.
//
// The basis inverse is kept explicitly (m x m, product-form updates) and
// recomputed by Gauss-Jordan elimination every `refactor_every` pivots. Rows
// are scaled to a largest coefficient of one.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "anticoloc/error.hpp"
#include "anticoloc/mip/linear_model.hpp"

namespace anticoloc {

enum class LpStatus { Optimal, Infeasible, IterationLimit, Interrupted };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Interrupted: return "interrupted";
    default: return "iteration_limit";
  }
}

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;  // structural values
  std::int64_t iterations = 0;
};

struct LpOptions {
  double primal_tol = 1e-7;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  std::size_t max_rows = 4000;
  int refactor_every = 0;  // 0: max(100, rows / 2)
  int bland_after = 50;  // degenerate pivots in a row before Bland's rule
  std::int64_t iteration_limit = 0;  // 0: derived from model size
  bool perturb = true;
};

class DualSimplex {
 public:
  using Clock = std::chrono::steady_clock;

  explicit DualSimplex(const LinearModel& model, const LpOptions& opt = {}) : opt_(opt) {
    n_ = model.vars.size();
    for (std::size_t j = 0; j < n_; ++j)
      if (!std::isfinite(model.vars[j].lb) || !std::isfinite(model.vars[j].ub))
        throw InvalidInput("the in-process LP solver needs finite bounds on every variable");
    // Empty rows are checked once and dropped.
    for (const auto& r : model.rows) {
      if (r.terms.empty()) {
        const bool ok = (r.sense != Sense::LE || 0.0 <= r.rhs + opt_.primal_tol) &&
                        (r.sense != Sense::GE || 0.0 >= r.rhs - opt_.primal_tol) &&
                        (r.sense != Sense::EQ || std::abs(r.rhs) <= opt_.primal_tol);
        if (!ok) trivially_infeasible_ = true;
        continue;
      }
      rows_.push_back(&r);
    }
    m_ = rows_.size();
    if (m_ > opt_.max_rows)
      throw SizeLimitExceeded("LP has " + std::to_string(m_) + " rows; the in-process solver takes at most " +
                              std::to_string(opt_.max_rows) + " (export the model instead)");
    // Column-major copy of A.
    col_start_.assign(n_ + 1, 0);
    for (const auto* r : rows_)
      for (const auto& t : r->terms) ++col_start_[static_cast<std::size_t>(t.var) + 1];
    for (std::size_t j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
    col_row_.resize(col_start_[n_]);
    col_val_.resize(col_start_[n_]);
    // Rows are scaled to a largest coefficient of one; the logicals carry
    // the scaled activity.
    row_scale_.assign(m_, 1.0);
    for (std::size_t i = 0; i < m_; ++i) {
      double big = 0.0;
      for (const auto& t : rows_[i]->terms) big = std::max(big, std::abs(t.coef));
      if (big > 0.0) row_scale_[i] = 1.0 / big;
    }
    std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
    for (std::size_t i = 0; i < m_; ++i)
      for (const auto& t : rows_[i]->terms) {
        const auto j = static_cast<std::size_t>(t.var);
        col_row_[fill[j]] = i;
        col_val_[fill[j]++] = t.coef * row_scale_[i];
      }
    cost_.assign(n_ + m_, 0.0);
    for (const auto& t : model.objective) cost_[static_cast<std::size_t>(t.var)] = t.coef;
    lb_.assign(n_ + m_, 0.0);
    ub_.assign(n_ + m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      lb_[j] = model.vars[j].lb;
      ub_[j] = model.vars[j].ub;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& r = *rows_[i];
      double lo = 0.0, hi = 0.0;
      for (const auto& t : r.terms) {
        const auto j = static_cast<std::size_t>(t.var);
        lo += t.coef > 0 ? t.coef * lb_[j] : t.coef * ub_[j];
        hi += t.coef > 0 ? t.coef * ub_[j] : t.coef * lb_[j];
      }
      lb_[n_ + i] = (r.sense == Sense::LE ? std::min(lo, r.rhs) : r.rhs) * row_scale_[i];
      ub_[n_ + i] = (r.sense == Sense::GE ? std::max(hi, r.rhs) : r.rhs) * row_scale_[i];
      if (!std::isfinite(lb_[n_ + i]) || !std::isfinite(ub_[n_ + i]))
        throw InvalidInput("row '" + r.name + "' has no finite activity bound");
    }
    // All-logical basis: B = -I.
    head_.resize(m_);
    pos_.assign(n_ + m_, -1);
    at_upper_.assign(n_ + m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      pos_[n_ + i] = static_cast<int>(i);
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = -1.0;
    x_.assign(n_ + m_, 0.0);
    d_.assign(n_ + m_, 0.0);
    work_cost_ = cost_;
  }

  std::size_t num_rows() const { return m_; }
  std::size_t num_cols() const { return n_; }

  double lower(std::size_t j) const { return lb_[j]; }
  double upper(std::size_t j) const { return ub_[j]; }

  void set_bounds(std::size_t j, double lb, double ub) {
    lb_[j] = lb;
    ub_[j] = ub;
  }

  // Solves stop with Interrupted once this passes.
  void set_deadline(std::optional<Clock::time_point> t) { deadline_ = t; }

  LpResult solve() {
    LpResult res;
    if (trivially_infeasible_) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    for (std::size_t j = 0; j < n_; ++j)
      if (lb_[j] > ub_[j] + opt_.primal_tol) {
        res.status = LpStatus::Infeasible;
        return res;
      }
    work_cost_ = cost_;
    compute_duals();
    place_nonbasics();
    bool perturbed = false;
    if (opt_.perturb) {
      perturb();
      perturbed = true;
      compute_duals();
      place_nonbasics();
    }
    compute_primals();
    for (;;) {
      const LpStatus st = iterate(res);
      if (st != LpStatus::Optimal || !perturbed) {
        res.status = st;
        return finish(res);
      }
      // Back to the true costs; flips restore dual feasibility.
      work_cost_ = cost_;
      perturbed = false;
      compute_duals();
      fix_dual_signs(0.0);
      compute_primals();
    }
  }

  // Reduced cost of a column at the last solve.
  double reduced_cost(std::size_t j) const { return d_[j]; }

 private:
  struct Candidate {
    std::size_t j;
    double ratio;
    double abs_alpha;
  };

  LpStatus iterate(LpResult& res) {
    const std::int64_t limit =
        opt_.iteration_limit > 0 ? opt_.iteration_limit : 1000 + 50 * static_cast<std::int64_t>(n_ + m_);
    int degenerate = 0;
    int since_refactor = 0;
    std::vector<double> rho(m_), alpha(n_ + m_), col(m_);
    std::vector<Candidate> cand;
    const int refactor_every =
        opt_.refactor_every > 0 ? opt_.refactor_every : std::max(100, static_cast<int>(m_ / 2));
    for (;;) {
      if (res.iterations >= limit) return LpStatus::IterationLimit;
      if (deadline_ && (res.iterations & 63) == 0 && Clock::now() > *deadline_) return LpStatus::Interrupted;
      const bool bland = degenerate >= opt_.bland_after;
      // Leaving row: largest bound violation (Bland: smallest index).
      std::size_t r = m_;
      double worst = opt_.primal_tol;
      std::size_t best_var = n_ + m_;
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t p = head_[i];
        const double v = std::max(lb_[p] - x_[p], x_[p] - ub_[p]);
        if (v <= opt_.primal_tol) continue;
        if (bland ? p < best_var : v > worst) {
          worst = v;
          best_var = p;
          r = i;
        }
      }
      if (r == m_) {
        // Drift may leave small dual infeasibilities; flip and go on.
        if (!fix_dual_signs(opt_.dual_tol)) return LpStatus::Optimal;
        compute_primals();
        continue;
      }
      const std::size_t p = head_[r];
      const bool to_upper = x_[p] > ub_[p];
      const double sgn = to_upper ? 1.0 : -1.0;
      // Row r of B^-1 [A -I] for every nonbasic column.
      std::copy_n(binv_.begin() + static_cast<std::ptrdiff_t>(r * m_), m_, rho.begin());
      cand.clear();
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (pos_[j] >= 0) continue;
        double a;
        if (j < n_) {
          a = 0.0;
          for (std::size_t e = col_start_[j]; e < col_start_[j + 1]; ++e) a += rho[col_row_[e]] * col_val_[e];
        } else {
          a = -rho[j - n_];
        }
        alpha[j] = a;
        if (ub_[j] - lb_[j] <= 0.0) continue;  // fixed columns never enter
        if (std::abs(a) <= opt_.pivot_tol) continue;
        const double sa = sgn * a;
        if (at_upper_[j] ? sa >= 0.0 : sa <= 0.0) continue;
        // Reduced costs of the wrong sign within tolerance count as zero.
        const double dj = at_upper_[j] ? -d_[j] : d_[j];
        cand.push_back({j, std::max(0.0, dj) / std::abs(a), std::abs(a)});
      }
      if (cand.empty()) return LpStatus::Infeasible;

      std::size_t q = n_ + m_;
      if (bland) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : cand)
          if (c.ratio < best - 1e-12 || (c.ratio <= best + 1e-12 && c.j < q)) {
            best = c.ratio;
            q = c.j;
          }
      } else {
        double best = std::numeric_limits<double>::infinity(), best_a = 0.0;
        for (const auto& c : cand)
          if (c.ratio < best - 1e-12 || (c.ratio <= best + 1e-12 && c.abs_alpha > best_a)) {
            best = c.ratio;
            best_a = c.abs_alpha;
            q = c.j;
          }
      }

      ftran(q, col);
      const double piv = col[r];
      if (std::abs(piv) <= opt_.pivot_tol) {
        // Row and column disagree: the inverse has drifted.
        refactor();
        compute_duals();
        compute_primals();
        since_refactor = 0;
        ++res.iterations;
        continue;
      }
      // Dual step.
      const double theta = d_[q] / alpha[q];
      for (std::size_t j = 0; j < n_ + m_; ++j)
        if (pos_[j] < 0) d_[j] -= theta * alpha[j];
      d_[p] = -theta;
      d_[q] = 0.0;
      degenerate = std::abs(theta) <= 1e-12 ? degenerate + 1 : 0;
      // Primal step: p moves to its violated bound.
      const double target = to_upper ? ub_[p] : lb_[p];
      const double delta = (x_[p] - target) / piv;
      for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] -= delta * col[i];
      x_[q] += delta;
      x_[p] = target;
      // Basis change.
      pos_[q] = static_cast<int>(r);
      pos_[p] = -1;
      head_[r] = q;
      at_upper_[p] = to_upper ? 1 : 0;
      at_upper_[q] = 0;
      update_inverse(r, col);
      ++res.iterations;
      if (++since_refactor >= refactor_every) {
        refactor();
        compute_duals();
        compute_primals();
        since_refactor = 0;
      }
    }
  }

  LpResult finish(LpResult& res) {
    res.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    double obj = 0.0;
    for (std::size_t j = 0; j < n_; ++j) obj += cost_[j] * res.x[j];
    res.objective = obj;
    return res;
  }

  // Small deterministic cost shifts that push each reduced cost further
  // from zero on the side it already has.
  void perturb() {
    double scale = 1.0;
    for (std::size_t j = 0; j < n_; ++j) scale = std::max(scale, std::abs(cost_[j]));
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::size_t j = 0; j < n_; ++j) {
      h ^= j + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2);
      const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
      const double eps = 1e-7 * scale * (1.0 + u);
      work_cost_[j] = cost_[j] + (pos_[j] < 0 && at_upper_[j] ? -eps : eps);
    }
  }

  // Column j of [A -I].
  template <typename F>
  void for_column(std::size_t j, F&& f) const {
    if (j < n_) {
      for (std::size_t e = col_start_[j]; e < col_start_[j + 1]; ++e) f(col_row_[e], col_val_[e]);
    } else {
      f(j - n_, -1.0);
    }
  }

  void ftran(std::size_t j, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for_column(j, [&](std::size_t row, double v) {
      for (std::size_t i = 0; i < m_; ++i) out[i] += binv_[i * m_ + row] * v;
    });
  }

  void update_inverse(std::size_t r, const std::vector<double>& col) {
    double* rr = &binv_[r * m_];
    const double inv = 1.0 / col[r];
    for (std::size_t k = 0; k < m_; ++k) rr[k] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || col[i] == 0.0) continue;
      const double f = col[i];
      double* ri = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) ri[k] -= f * rr[k];
    }
  }

  // Gauss-Jordan inversion of the current basis. Each column takes the
  // largest remaining entry as pivot. Columns left without a usable pivot
  // are swapped for the logicals of the uncovered rows, and the inversion
  // restarts.
  void refactor() {
    for (;;) {
      std::vector<double> b(m_ * m_, 0.0);
      for (std::size_t c = 0; c < m_; ++c)
        for_column(head_[c], [&](std::size_t row, double v) { b[row * m_ + c] = v; });
      std::vector<double> inv(m_ * m_, 0.0);
      for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
      std::vector<std::size_t> row_of(m_, m_);
      std::vector<char> used(m_, 0);
      std::vector<std::size_t> dependent;
      for (std::size_t c = 0; c < m_; ++c) {
        std::size_t piv = m_;
        double big = 1e-11;
        for (std::size_t i = 0; i < m_; ++i)
          if (!used[i] && std::abs(b[i * m_ + c]) > big) {
            big = std::abs(b[i * m_ + c]);
            piv = i;
          }
        if (piv == m_) {
          dependent.push_back(c);
          continue;
        }
        used[piv] = 1;
        row_of[c] = piv;
        const double d = 1.0 / b[piv * m_ + c];
        for (std::size_t k = 0; k < m_; ++k) {
          b[piv * m_ + k] *= d;
          inv[piv * m_ + k] *= d;
        }
        for (std::size_t i = 0; i < m_; ++i) {
          if (i == piv) continue;
          const double f = b[i * m_ + c];
          if (f == 0.0) continue;
          for (std::size_t k = 0; k < m_; ++k) {
            b[i * m_ + k] -= f * b[piv * m_ + k];
            inv[i * m_ + k] -= f * inv[piv * m_ + k];
          }
        }
      }
      if (dependent.empty()) {
        binv_.assign(m_ * m_, 0.0);
        for (std::size_t c = 0; c < m_; ++c)
          std::copy_n(inv.begin() + static_cast<std::ptrdiff_t>(row_of[c] * m_), m_,
                      binv_.begin() + static_cast<std::ptrdiff_t>(c * m_));
        return;
      }
      std::size_t i = 0;
      for (std::size_t c : dependent) {
        while (used[i]) ++i;
        used[i] = 1;
        const std::size_t out = head_[c], in = n_ + i;
        if (pos_[in] >= 0) throw InternalError("LP basis repair failed");
        pos_[out] = -1;
        at_upper_[out] = x_[out] > 0.5 * (lb_[out] + ub_[out]) ? 1 : 0;
        x_[out] = at_upper_[out] ? ub_[out] : lb_[out];
        head_[c] = in;
        pos_[in] = static_cast<int>(c);
        at_upper_[in] = 0;
      }
    }
  }

  void compute_duals() {
    // y = c_B B^-1, d_j = c_j - y a_j.
    std::vector<double> y(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = work_cost_[head_[i]];
      if (cb == 0.0) continue;
      for (std::size_t k = 0; k < m_; ++k) y[k] += cb * binv_[i * m_ + k];
    }
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (pos_[j] >= 0) {
        d_[j] = 0.0;
        continue;
      }
      double s = work_cost_[j];
      for_column(j, [&](std::size_t row, double v) { s -= y[row] * v; });
      d_[j] = s;
    }
  }

  // Nonbasic columns sit at the bound their reduced cost asks for.
  void place_nonbasics() {
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (pos_[j] >= 0) continue;
      at_upper_[j] = d_[j] < 0.0 ? 1 : 0;
      x_[j] = at_upper_[j] ? ub_[j] : lb_[j];
    }
  }

  // Moves nonbasic columns whose reduced cost has the wrong sign (beyond
  // `tol`) to the other bound. Returns whether anything moved.
  bool fix_dual_signs(double tol) {
    bool moved = false;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (pos_[j] >= 0 || ub_[j] == lb_[j]) continue;
      const char want = d_[j] < -tol ? 1 : (d_[j] > tol ? 0 : at_upper_[j]);
      if (want != at_upper_[j]) {
        at_upper_[j] = want;
        moved = true;
      }
      x_[j] = at_upper_[j] ? ub_[j] : lb_[j];
    }
    return moved;
  }

  void compute_primals() {
    // B x_B = -N x_N (the system is A x - s = 0).
    std::vector<double> rhs(m_, 0.0);
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (pos_[j] >= 0 || x_[j] == 0.0) continue;
      const double v = x_[j];
      for_column(j, [&](std::size_t row, double a) { rhs[row] -= a * v; });
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += binv_[i * m_ + k] * rhs[k];
      x_[head_[i]] = s;
    }
  }

  LpOptions opt_;
  std::size_t n_ = 0, m_ = 0;
  bool trivially_infeasible_ = false;
  std::optional<Clock::time_point> deadline_;
  std::vector<const Constraint*> rows_;
  std::vector<double> row_scale_;
  std::vector<std::size_t> col_start_, col_row_;
  std::vector<double> col_val_;
  std::vector<double> cost_, work_cost_, lb_, ub_;
  std::vector<std::size_t> head_;
  std::vector<int> pos_;
  std::vector<char> at_upper_;
  std::vector<double> binv_;
  std::vector<double> x_, d_;
};

inline LpResult solve_lp(const LinearModel& model, const LpOptions& opt = {}) {
  DualSimplex s(model, opt);
  return s.solve();
}

}  // namespace anticoloc
