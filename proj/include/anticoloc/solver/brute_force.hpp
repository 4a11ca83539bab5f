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

// Exhaustive reference solver for tiny instances: every VM -> PM map,
// each PM's mix checked with scalar_feasible and disk_assignment. Branches
// are cut only when a PM's mix is already infeasible (adding VMs never
// repairs it) or the cost so far is already worse than the best.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "anticoloc/error.hpp"
#include "anticoloc/feasibility.hpp"
#include "anticoloc/model.hpp"
#include "anticoloc/solution.hpp"

namespace anticoloc {

struct BruteForceLimits {
  std::int64_t max_vms = 8;
  std::int64_t max_pms = 5;
};

struct BruteForceResult {
  bool feasible = false;
  std::int64_t cost = 0;
  Placement placement;
  // Every used-PM set that reaches the optimum (filled on request).
  std::set<std::vector<int>> optimal_supports;
};

inline BruteForceResult brute_force(const Instance& inst, bool collect_supports = false,
                                    const BruteForceLimits& lim = {}) {
  inst.validate();
  if (inst.num_vms() > lim.max_vms || inst.num_pms() > lim.max_pms)
    throw SizeLimitExceeded("brute force is limited to " + std::to_string(lim.max_vms) + " VMs and " +
                            std::to_string(lim.max_pms) + " PMs");
  const auto& cat = inst.catalog;
  const auto vms = expand_vms(inst);
  const auto pms = expand_pms(inst);
  const std::size_t n = vms.size(), m = pms.size(), nt = cat.num_vm_types();

  std::map<std::pair<int, VmMultiset>, bool> cache;
  auto ok = [&](int j, const VmMultiset& mix) {
    const int v = pms[static_cast<std::size_t>(j)].type;
    auto key = std::make_pair(v, mix);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const auto& pt = cat.pm_types[static_cast<std::size_t>(v)];
    bool f = true;
    for (std::size_t u = 0; u < nt; ++u)
      if (mix[u] > 0 && !inst.policy.allows(pt.name, cat.vm_types[u].name)) f = false;
    f = f && scalar_feasible(cat, mix, pt) && disk_assignment(cat, mix, pt).has_value();
    cache.emplace(std::move(key), f);
    return f;
  };

  BruteForceResult res;
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  std::int64_t best = inf;
  std::vector<int> assign(n, -1), best_assign;
  std::vector<VmMultiset> mix(m, VmMultiset(nt, 0));
  std::vector<int> load(m, 0);
  std::int64_t cur = 0;

  auto support = [&] {
    std::vector<int> s;
    for (std::size_t j = 0; j < m; ++j)
      if (load[j] > 0) s.push_back(static_cast<int>(j));
    return s;
  };

  auto go = [&](auto&& self, std::size_t i) -> void {
    if (collect_supports ? cur > best : cur >= best) return;
    if (i == n) {
      if (cur < best) {
        best = cur;
        best_assign = assign;
        res.optimal_supports.clear();
      }
      if (collect_supports) res.optimal_supports.insert(support());
      return;
    }
    const auto u = static_cast<std::size_t>(vms[i].type);
    for (std::size_t j = 0; j < m; ++j) {
      ++mix[j][u];
      if (ok(static_cast<int>(j), mix[j])) {
        const std::int64_t add = load[j] == 0 ? cat.pm_types[static_cast<std::size_t>(pms[j].type)].cost : 0;
        ++load[j];
        cur += add;
        assign[i] = static_cast<int>(j);
        self(self, i + 1);
        cur -= add;
        --load[j];
      }
      --mix[j][u];
    }
    assign[i] = -1;
  };
  go(go, 0);

  if (best == inf) return res;
  res.feasible = true;
  res.cost = best;
  res.placement = Placement::empty_for(inst);
  res.placement.vm_to_pm = best_assign;
  for (std::size_t j = 0; j < m; ++j) {
    bool used = false;
    for (int a : best_assign) used = used || a == static_cast<int>(j);
    if (used) assign_disks_from_mix(res.placement, inst, static_cast<int>(j));
  }
  return res;
}

}  // namespace anticoloc
