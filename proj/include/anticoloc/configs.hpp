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

// Enumeration of the feasible configurations of a PM type.

#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "anticoloc/feasibility.hpp"
#include "anticoloc/model.hpp"

namespace anticoloc {

inline constexpr std::int64_t kDefaultConfigCap = 1'000'000;

// Feasible configurations of one PM type in lexicographic order of the
// catalog's VM types. When `includes_zero` is set, config 0 is the zero
// vector (an idle PM).
struct ConfigSet {
  std::string pm_type;
  std::string policy_tag;
  bool includes_zero = true;
  std::vector<VmMultiset> configs;

  bool operator==(const ConfigSet&) const = default;

  std::size_t size() const { return configs.size(); }
  std::int64_t w(std::size_t t, std::size_t u) const { return configs[t][u]; }
};

struct EnumerateOptions {
  std::int64_t cap = kDefaultConfigCap;
  bool include_zero = true;
  // Opt-in per-type ceiling (typically the instance demand m_u).
  std::optional<std::vector<std::int64_t>> demand_cap;
};

struct EnumerateResult {
  bool cap_exceeded = false;
  ConfigSet set;  // empty when cap_exceeded
};

// Sound per-type ceilings on the number of copies in any feasible
// configuration. Disk limits are capacity based, since anti-colocation only
// binds volumes of the same VM.
inline std::vector<std::int64_t> upper_bounds(const PmType& pm, const Catalog& catalog,
                                              const Policy& policy) {
  std::vector<std::int64_t> ub(catalog.num_vm_types(), 0);
  std::vector<std::int64_t> disks = pm.disks;
  std::sort(disks.rbegin(), disks.rend());
  const std::int64_t disk_total = std::accumulate(disks.begin(), disks.end(), std::int64_t{0});
  for (std::size_t u = 0; u < ub.size(); ++u) {
    const auto& t = catalog.vm_types[u];
    if (!policy.allows(pm.name, t.name)) continue;
    if (t.volumes.size() > disks.size()) continue;
    std::vector<std::int64_t> vols = t.volumes;
    std::sort(vols.rbegin(), vols.rend());
    bool fits = true;
    for (std::size_t k = 0; k < vols.size(); ++k)
      if (vols[k] > disks[k]) fits = false;
    if (!fits) continue;
    const std::int64_t vol_total = std::accumulate(vols.begin(), vols.end(), std::int64_t{0});
    ub[u] = std::min({std::int64_t{pm.vcpus / t.vcpus}, pm.memory_mib / t.memory_mib,
                      disk_total / vol_total});
  }
  return ub;
}

namespace detail {

class ConfigEnumerator {
 public:
  ConfigEnumerator(const PmType& pm, const Catalog& catalog, const Policy& policy,
                   const EnumerateOptions& opt)
      : pm_(pm), catalog_(catalog), opt_(opt), ub_(upper_bounds(pm, catalog, policy)) {
    if (opt.demand_cap) {
      if (opt.demand_cap->size() != ub_.size())
        throw InvalidInput("demand cap has wrong dimension");
      for (std::size_t u = 0; u < ub_.size(); ++u)
        ub_[u] = std::min(ub_[u], std::max<std::int64_t>(0, (*opt.demand_cap)[u]));
    }
    w_.assign(ub_.size(), 0);
  }

  EnumerateResult run() {
    dfs(0, pm_.disks, 0, 0);
    EnumerateResult r;
    r.cap_exceeded = exceeded_;
    if (!exceeded_) r.set.configs = std::move(out_);
    return r;
  }

 private:
  void emit() {
    if (!opt_.include_zero && std::all_of(w_.begin(), w_.end(), [](auto c) { return c == 0; }))
      return;
    if (static_cast<std::int64_t>(out_.size()) >= opt_.cap) {
      exceeded_ = true;
      return;
    }
    out_.push_back(w_);
  }

  // Rebuilds remaining capacities from a full witness of the current prefix.
  std::optional<std::vector<std::int64_t>> full_check() {
    auto wit = disk_assignment(catalog_, w_, pm_);
    if (!wit) return std::nullopt;
    std::vector<std::int64_t> rem = pm_.disks;
    for (const auto& vd : wit->vms) {
      const auto& vols = catalog_.vm_types[vd.vm_type].volumes;
      for (std::size_t k = 0; k < vols.size(); ++k) rem[vd.disks[k]] -= vols[k];
    }
    return rem;
  }

  void dfs(std::size_t u, const std::vector<std::int64_t>& rem, std::int64_t cpu, std::int64_t mem) {
    if (exceeded_) return;
    if (u == ub_.size()) {
      emit();
      return;
    }
    dfs(u + 1, rem, cpu, mem);
    const auto& t = catalog_.vm_types[u];
    std::vector<std::int64_t> cur = rem;
    for (std::int64_t c = 1; c <= ub_[u] && !exceeded_; ++c) {
      cpu += t.vcpus;
      mem += t.memory_mib;
      if (cpu > pm_.vcpus || mem > pm_.memory_mib) break;
      w_[u] = c;
      // Extending the parent's witness is sufficient but not necessary;
      // fall back to the complete matcher before declaring the prefix dead.
      if (auto pick = match_disks({&t.volumes}, cur)) {
        for (std::size_t k = 0; k < t.volumes.size(); ++k) cur[(*pick)[0][k]] -= t.volumes[k];
      } else if (auto full = full_check()) {
        cur = std::move(*full);
      } else {
        break;  // monotone: more copies cannot fit either
      }
      dfs(u + 1, cur, cpu, mem);
    }
    w_[u] = 0;
  }

  const PmType& pm_;
  const Catalog& catalog_;
  EnumerateOptions opt_;
  std::vector<std::int64_t> ub_;
  VmMultiset w_;
  std::vector<VmMultiset> out_;
  bool exceeded_ = false;
};

}  // namespace detail

inline EnumerateResult enumerate(const PmType& pm, const Catalog& catalog, const Policy& policy,
                                 const EnumerateOptions& opt = {}) {
  if (opt.cap < 1) throw InvalidInput("configuration cap must be >= 1");
  detail::ConfigEnumerator e(pm, catalog, policy, opt);
  auto r = e.run();
  r.set.pm_type = pm.name;
  r.set.policy_tag = digest(policy, pm.name);
  r.set.includes_zero = opt.include_zero;
  return r;
}

struct CountEntry {
  std::string pm_type;
  std::optional<std::int64_t> count;  // nullopt == cap exceeded

  bool operator==(const CountEntry&) const = default;
};

// Counts per PM type, in catalog order. Types run on up to `jobs` threads.
inline std::vector<CountEntry> count_table(const Catalog& catalog, const Policy& policy,
                                           const EnumerateOptions& opt = {}, int jobs = 1) {
  std::vector<CountEntry> out(catalog.num_pm_types());
  auto one = [&](std::size_t v) {
    auto r = enumerate(catalog.pm_types[v], catalog, policy, opt);
    CountEntry e{catalog.pm_types[v].name, std::nullopt};
    if (!r.cap_exceeded) e.count = static_cast<std::int64_t>(r.set.size());
    return e;
  };
  if (jobs <= 1) {
    for (std::size_t v = 0; v < out.size(); ++v) out[v] = one(v);
    return out;
  }
  for (std::size_t start = 0; start < out.size(); start += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<CountEntry>> fut;
    const std::size_t end = std::min(out.size(), start + static_cast<std::size_t>(jobs));
    for (std::size_t v = start; v < end; ++v) fut.push_back(std::async(std::launch::async, one, v));
    for (std::size_t v = start; v < end; ++v) out[v] = fut[v - start].get();
  }
  return out;
}

}  // namespace anticoloc
