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

// Shared test helpers: random small instances and oracles written without
// the library's search code.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <ostream>
#include <streambuf>
#include <string>
#include <vector>

#include "anticoloc.hpp"

namespace anticoloc::testing {

inline Instance empty_instance(const Catalog& cat = builtin_catalog()) {
  Instance t;
  t.catalog = cat;
  t.vm_demand.assign(cat.num_vm_types(), 0);
  t.pm_fleet.assign(cat.num_pm_types(), 0);
  return t;
}

inline Instance make_instance(const std::vector<std::pair<std::string, std::int64_t>>& vms,
                              const std::vector<std::pair<std::string, std::int64_t>>& pms) {
  auto t = empty_instance();
  for (const auto& [n, c] : vms) t.vm_demand[t.catalog.vm_index(n)] += c;
  for (const auto& [n, c] : pms) t.pm_fleet[t.catalog.pm_index(n)] += c;
  return t;
}

struct SmallInstanceOptions {
  int max_vms = 6;
  int max_pms = 4;
  // Keeps F1 small enough for the in-process solver.
  std::int64_t max_f1_rows = 500;
  int policy_one_in = 4;  // large-PM policy on roughly 1 in N instances
};

// A few VM types and PM types from the built-in catalog, drawn with
// replacement; resampled until the F1 model is small.
inline Instance random_small_instance(SplitMix64& rng, const SmallInstanceOptions& o = {}) {
  const auto cat = builtin_catalog();
  for (;;) {
    auto t = empty_instance(cat);
    const int n = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(o.max_vms));
    const int m = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(o.max_pms));
    std::vector<std::size_t> vts, pts;
    for (int k = 1 + static_cast<int>(rng.next() % 3); k > 0; --k) vts.push_back(rng.next() % cat.num_vm_types());
    for (int k = 1 + static_cast<int>(rng.next() % 3); k > 0; --k) pts.push_back(rng.next() % cat.num_pm_types());
    for (int i = 0; i < n; ++i) ++t.vm_demand[vts[rng.next() % vts.size()]];
    for (int j = 0; j < m; ++j) ++t.pm_fleet[pts[rng.next() % pts.size()]];
    if (o.policy_one_in > 0 && rng.next() % static_cast<std::uint64_t>(o.policy_one_in) == 0)
      t.policy = large_pm_policy();
    if (estimate_size(t, Formulation::F1, all_direct(t), {}).constraints <= o.max_f1_rows) return t;
  }
}

struct SuiteCase {
  Instance instance;
  BruteForceResult exact;  // with optimal supports
};

// Deterministic suite for the oracle criteria. Infeasible draws are kept
// up to `max_infeasible` so both verdicts are exercised.
inline std::vector<SuiteCase> oracle_suite(int count = 200, std::uint64_t seed = 20260417,
                                           int max_infeasible = 50) {
  SplitMix64 rng(seed);
  std::vector<SuiteCase> out;
  int infeasible = 0;
  while (static_cast<int>(out.size()) < count) {
    auto t = random_small_instance(rng);
    auto bf = brute_force(t, true);
    if (!bf.feasible) {
      if (infeasible >= max_infeasible) continue;
      ++infeasible;
    }
    out.push_back({std::move(t), std::move(bf)});
  }
  return out;
}

// Does some placement of every item's volumes on distinct disks respect the
// capacities? Plain enumeration of every volume -> disk map.
inline bool oracle_fits(const std::vector<std::vector<std::int64_t>>& items,
                        const std::vector<std::int64_t>& caps) {
  std::vector<std::pair<std::size_t, std::int64_t>> vols;  // item, size
  for (std::size_t i = 0; i < items.size(); ++i)
    for (auto s : items[i]) vols.push_back({i, s});
  std::vector<std::size_t> choice(vols.size(), 0);
  const std::size_t d = caps.size();
  if (d == 0) return vols.empty();
  for (;;) {
    std::vector<std::int64_t> load(d, 0);
    bool ok = true;
    for (std::size_t k = 0; k < vols.size() && ok; ++k) {
      load[choice[k]] += vols[k].second;
      if (load[choice[k]] > caps[choice[k]]) ok = false;
      for (std::size_t q = 0; q < k && ok; ++q)
        if (vols[q].first == vols[k].first && choice[q] == choice[k]) ok = false;
    }
    if (ok) return true;
    std::size_t k = 0;
    while (k < choice.size() && ++choice[k] == d) choice[k++] = 0;
    if (k == choice.size()) return false;
  }
}

// Configuration count by plain box enumeration: scalar limits from raw
// capacities, disk check by oracle_fits. Only practical for small PMs.
inline std::int64_t oracle_config_count(const Catalog& cat, const PmType& pm) {
  const std::size_t nt = cat.num_vm_types();
  std::vector<std::int64_t> w(nt, 0);
  std::int64_t count = 0;
  std::function<void(std::size_t, std::int64_t, std::int64_t)> go = [&](std::size_t u, std::int64_t cpu,
                                                                       std::int64_t mem) {
    if (u == nt) {
      std::vector<std::vector<std::int64_t>> items;
      for (std::size_t v = 0; v < nt; ++v)
        for (std::int64_t c = 0; c < w[v]; ++c) items.push_back(cat.vm_types[v].volumes);
      if (oracle_fits(items, pm.disks)) ++count;
      return;
    }
    const auto& t = cat.vm_types[u];
    for (w[u] = 0; cpu + w[u] * t.vcpus <= pm.vcpus && mem + w[u] * t.memory_mib <= pm.memory_mib; ++w[u]) {
      // A copy whose volumes cannot all fit ends the loop early.
      if (w[u] > 0) {
        std::vector<std::vector<std::int64_t>> one(static_cast<std::size_t>(w[u]), t.volumes);
        std::int64_t total = 0;
        for (const auto& it : one)
          for (auto s : it) total += s;
        std::int64_t cap = 0;
        for (auto s : pm.disks) cap += s;
        if (total > cap || t.volumes.size() > pm.disks.size()) break;
      }
      go(u + 1, cpu + w[u] * t.vcpus, mem + w[u] * t.memory_mib);
    }
    w[u] = 0;
  };
  go(0, 0, 0);
  return count;
}

// FNV-1a over everything written to it.
class HashBuf : public std::streambuf {
 public:
  std::uint64_t digest() const { return h_; }
  std::uint64_t bytes() const { return n_; }

 protected:
  int_type overflow(int_type c) override {
    if (c != traits_type::eof()) eat(static_cast<unsigned char>(c));
    return c;
  }
  std::streamsize xsputn(const char* s, std::streamsize n) override {
    for (std::streamsize i = 0; i < n; ++i) eat(static_cast<unsigned char>(s[i]));
    return n;
  }

 private:
  void eat(unsigned char c) {
    h_ = (h_ ^ c) * 1099511628211ULL;
    ++n_;
  }
  std::uint64_t h_ = 1469598103934665603ULL;
  std::uint64_t n_ = 0;
};

inline std::uint64_t mps_digest(const LinearModel& m) {
  HashBuf buf;
  std::ostream out(&buf);
  write_mps(m, out);
  out.flush();
  return buf.digest();
}

// Field-by-field digest of a model (names, kinds, bounds, rows, objective).
inline std::uint64_t model_digest(const LinearModel& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto bytes = [&](const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) h = (h ^ c[i]) * 1099511628211ULL;
  };
  auto str = [&](const std::string& s) {
    const std::uint64_t n = s.size();
    bytes(&n, sizeof n);
    bytes(s.data(), s.size());
  };
  auto num = [&](double x) { bytes(&x, sizeof x); };
  str(m.name);
  for (const auto& v : m.vars) {
    str(v.name);
    num(v.lb);
    num(v.ub);
    const int k = static_cast<int>(v.kind);
    bytes(&k, sizeof k);
  }
  for (const auto& r : m.rows) {
    str(r.name);
    const int s = static_cast<int>(r.sense);
    bytes(&s, sizeof s);
    num(r.rhs);
    for (const auto& t : r.terms) {
      bytes(&t.var, sizeof t.var);
      num(t.coef);
    }
  }
  for (const auto& t : m.objective) {
    bytes(&t.var, sizeof t.var);
    num(t.coef);
  }
  return h;
}

inline Instance scale_costs(Instance t, std::int64_t theta) {
  for (auto& p : t.catalog.pm_types) p.cost *= theta;
  return t;
}

}  // namespace anticoloc::testing
