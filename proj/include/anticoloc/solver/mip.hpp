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

// LP-based branch-and-bound.
//
// Branching: among fractional integer variables of the highest priority,
// the most fractional one, ties to the lowest index.
// Node order: depth first until an incumbent exists, then best bound (ties
// to the oldest node). Each node re-solves the shared dual simplex from the
// previous basis after swapping bounds, and tries a nearest-rounding
// incumbent. When every objective column is integral with integer
// coefficients, node bounds are rounded up to the next multiple of the
// coefficients' gcd before pruning.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "anticoloc/mip/linear_model.hpp"
#include "anticoloc/solver/lp.hpp"

namespace anticoloc {

enum class MipStatus { Optimal, Infeasible, TimeLimitWithIncumbent, TimeLimitNoIncumbent };

inline const char* to_string(MipStatus s) {
  switch (s) {
    case MipStatus::Optimal: return "optimal";
    case MipStatus::Infeasible: return "infeasible";
    case MipStatus::TimeLimitWithIncumbent: return "time_limit_with_incumbent";
    default: return "time_limit_no_incumbent";
  }
}

// Snapshot passed to the event hook after every node.
struct MipEvent {
  std::int64_t node = 0;
  double root_lp = 0.0;
  double node_lp = 0.0;
  double best_bound = 0.0;
  double incumbent = std::numeric_limits<double>::infinity();
};

struct MipParams {
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  double gap_tolerance = 0.0;
  std::int64_t node_limit = 0;  // 0: unlimited
  double integrality_tol = 1e-6;
  std::vector<int> priority;  // per variable, larger first; empty: all equal
  LpOptions lp;
  std::function<void(const MipEvent&)> on_event;
};

// Node and time limits both end in the time_limit_* statuses.
struct MipResult {
  MipStatus status = MipStatus::Infeasible;
  double objective = std::numeric_limits<double>::infinity();
  double bound = -std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  std::vector<double> x;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double root_lp = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;

  bool has_incumbent() const { return !x.empty(); }
};

inline double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

namespace detail {

// gcd of the objective when every objective column is integral with an
// integer coefficient; 0 otherwise.
inline double objective_step(const LinearModel& m) {
  std::int64_t g = 0;
  for (const auto& t : m.objective) {
    if (m.vars[static_cast<std::size_t>(t.var)].kind == VarKind::Continuous) return 0.0;
    const double r = std::round(t.coef);
    if (std::abs(r - t.coef) > 1e-9 || std::abs(r) > 1e15) return 0.0;
    g = std::gcd(g, static_cast<std::int64_t>(std::abs(r)));
  }
  return static_cast<double>(g);
}

struct BoundChange {
  int var;
  double lb, ub;
};

struct Node {
  std::vector<BoundChange> changes;
  double bound;
  std::int64_t id;
};

}  // namespace detail

inline MipResult solve_mip(const LinearModel& model, const MipParams& params = {}) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const double inf = std::numeric_limits<double>::infinity();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  MipResult res;
  DualSimplex lp(model, params.lp);
  if (std::isfinite(params.time_limit))
    lp.set_deadline(t0 + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(params.time_limit)));
  const std::size_t n = model.vars.size();
  if (!params.priority.empty() && params.priority.size() != n)
    throw InvalidInput("branching priority needs one entry per variable");
  auto prio = [&](std::size_t j) { return params.priority.empty() ? 0 : params.priority[j]; };
  std::vector<double> root_lb(n), root_ub(n);
  for (std::size_t j = 0; j < n; ++j) {
    root_lb[j] = model.vars[j].lb;
    root_ub[j] = model.vars[j].ub;
    if (model.vars[j].kind != VarKind::Continuous) {
      // Integral bounds for integral columns.
      root_lb[j] = std::ceil(root_lb[j] - params.integrality_tol);
      root_ub[j] = std::floor(root_ub[j] + params.integrality_tol);
      lp.set_bounds(j, root_lb[j], root_ub[j]);
    }
  }
  const double step = detail::objective_step(model);
  auto round_bound = [&](double b) {
    if (step <= 0.0 || !std::isfinite(b)) return b;
    return std::ceil((b - 1e-6) / step) * step;
  };

  double incumbent = inf;
  auto try_incumbent = [&](std::vector<double> x) {
    for (std::size_t j = 0; j < n; ++j)
      if (model.vars[j].kind != VarKind::Continuous) x[j] = std::round(x[j]);
    if (model.max_violation(x) > params.lp.primal_tol * 10) return;
    const double obj = model.evaluate_objective(x);
    if (obj < incumbent - 1e-9) {
      incumbent = obj;
      res.x = std::move(x);
    }
  };

  std::vector<detail::Node> open;
  bool best_first = false;
  auto worse = [](const detail::Node& a, const detail::Node& b) {
    return a.bound != b.bound ? a.bound > b.bound : a.id > b.id;
  };
  std::int64_t next_id = 0;
  open.push_back({{}, -inf, next_id++});
  std::vector<int> touched;
  bool limited = false;
  double limited_bound = inf;

  auto open_bound = [&] {
    double b = inf;
    for (const auto& nd : open) b = std::min(b, nd.bound);
    return b;
  };

  while (!open.empty()) {
    if (elapsed() > params.time_limit || (params.node_limit > 0 && res.nodes >= params.node_limit)) {
      limited = true;
      limited_bound = open_bound();
      break;
    }
    if (std::isfinite(incumbent) && params.gap_tolerance > 0.0 &&
        relative_gap(incumbent, round_bound(open_bound())) <= params.gap_tolerance)
      break;
    detail::Node node;
    if (best_first) {
      std::pop_heap(open.begin(), open.end(), worse);
      node = std::move(open.back());
      open.pop_back();
    } else {
      node = std::move(open.back());
      open.pop_back();
    }
    if (round_bound(node.bound) >= incumbent - 1e-9) continue;

    for (int j : touched) lp.set_bounds(static_cast<std::size_t>(j), root_lb[j], root_ub[j]);
    touched.clear();
    for (const auto& c : node.changes) {
      lp.set_bounds(static_cast<std::size_t>(c.var), c.lb, c.ub);
      touched.push_back(c.var);
    }
    LpResult r = lp.solve();
    if (r.status == LpStatus::Interrupted) {
      res.lp_iterations += r.iterations;
      open.push_back(std::move(node));
      if (best_first) std::push_heap(open.begin(), open.end(), worse);
      limited = true;
      limited_bound = open_bound();
      break;
    }
    ++res.nodes;
    res.lp_iterations += r.iterations;
    if (r.status == LpStatus::IterationLimit) throw InternalError("LP iteration limit reached in branch-and-bound");
    if (res.nodes == 1) res.root_lp = r.status == LpStatus::Optimal ? r.objective : inf;
    if (r.status != LpStatus::Optimal) {
      if (params.on_event) params.on_event({res.nodes, res.root_lp, inf, std::min(open_bound(), incumbent), incumbent});
      continue;
    }
    const double b = std::max(node.bound, r.objective);
    if (params.on_event)
      params.on_event({res.nodes, res.root_lp, r.objective, std::min({open_bound(), b, incumbent}), incumbent});
    if (round_bound(b) >= incumbent - 1e-9) continue;

    int branch = -1;
    double best_frac = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (model.vars[j].kind == VarKind::Continuous) continue;
      const double f = std::abs(r.x[j] - std::round(r.x[j]));
      if (f <= params.integrality_tol) continue;
      if (branch < 0 || prio(j) > prio(static_cast<std::size_t>(branch)) ||
          (prio(j) == prio(static_cast<std::size_t>(branch)) && f > best_frac)) {
        best_frac = f;
        branch = static_cast<int>(j);
      }
    }
    if (branch < 0) {
      const bool had = std::isfinite(incumbent);
      try_incumbent(r.x);
      if (!had && std::isfinite(incumbent) && !best_first) {
        best_first = true;
        std::make_heap(open.begin(), open.end(), worse);
      }
      continue;
    }
    {
      const bool had = std::isfinite(incumbent);
      try_incumbent(r.x);
      if (!had && std::isfinite(incumbent) && !best_first) {
        best_first = true;
        std::make_heap(open.begin(), open.end(), worse);
      }
    }
    if (round_bound(b) >= incumbent - 1e-9) continue;

    const double v = r.x[static_cast<std::size_t>(branch)];
    const auto j = static_cast<std::size_t>(branch);
    double cur_lb = root_lb[j], cur_ub = root_ub[j];
    for (const auto& c : node.changes)
      if (c.var == branch) {
        cur_lb = c.lb;
        cur_ub = c.ub;
      }
    detail::Node down{node.changes, b, next_id++};
    down.changes.push_back({branch, cur_lb, std::floor(v)});
    detail::Node up{std::move(node.changes), b, next_id++};
    up.changes.push_back({branch, std::ceil(v), cur_ub});
    const bool up_first = v - std::floor(v) >= 0.5;
    if (best_first) {
      open.push_back(std::move(down));
      std::push_heap(open.begin(), open.end(), worse);
      open.push_back(std::move(up));
      std::push_heap(open.begin(), open.end(), worse);
    } else if (up_first) {
      open.push_back(std::move(down));
      open.push_back(std::move(up));
    } else {
      open.push_back(std::move(up));
      open.push_back(std::move(down));
    }
  }

  res.seconds = elapsed();
  const bool has = std::isfinite(incumbent);
  if (has) res.objective = incumbent;
  if (limited) {
    res.status = has ? MipStatus::TimeLimitWithIncumbent : MipStatus::TimeLimitNoIncumbent;
    res.bound = std::min(round_bound(limited_bound), has ? incumbent : inf);
  } else if (!open.empty()) {
    // Stopped on the gap tolerance.
    res.status = MipStatus::Optimal;
    res.bound = std::min(round_bound(open_bound()), incumbent);
  } else {
    res.status = has ? MipStatus::Optimal : MipStatus::Infeasible;
    res.bound = has ? incumbent : inf;
  }
  res.gap = has ? relative_gap(incumbent, res.bound) : inf;
  return res;
}

}  // namespace anticoloc
