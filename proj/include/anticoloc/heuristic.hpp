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

// Randomized greedy first-fit.
//
// VMs are taken in a shuffled order. For each VM the used-PM list is
// shuffled and scanned, then the unused list. A PM accommodates the VM when
// vCPU, memory and policy allow it and the VM's volumes fit the PM's
// remaining disk space (exhaustive, earlier disks preferred). Disks already
// handed out are never moved.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <optional>
#include <vector>

#include "anticoloc/error.hpp"
#include "anticoloc/feasibility.hpp"
#include "anticoloc/model.hpp"
#include "anticoloc/rng.hpp"
#include "anticoloc/solution.hpp"

namespace anticoloc {

struct HeuristicParams {
  std::uint64_t seed = 0;
  std::int64_t runs = 1;
};

struct TraceStep {
  int vm = -1;
  int pm = -1;
  bool opened = false;  // the PM received its first VM here
};

struct HeuristicResult {
  bool feasible = false;
  std::int64_t cost = 0;
  std::int64_t used_pms = 0;
  Placement placement;
  std::vector<TraceStep> trace;
  int failed_vm = -1;  // VM nobody could take when infeasible
};

inline HeuristicResult place_randomized(const Instance& inst, std::uint64_t seed) {
  inst.validate();
  const auto& cat = inst.catalog;
  const auto vms = expand_vms(inst);
  const auto pms = expand_pms(inst);
  const auto mask = inst.policy.mask(cat);

  std::vector<std::int64_t> cpu(pms.size()), mem(pms.size());
  std::vector<std::vector<std::int64_t>> disks(pms.size());
  for (std::size_t j = 0; j < pms.size(); ++j) {
    const auto& pt = cat.pm_types[static_cast<std::size_t>(pms[j].type)];
    cpu[j] = pt.vcpus;
    mem[j] = pt.memory_mib;
    disks[j] = pt.disks;
  }

  SplitMix64 rng(seed);
  std::vector<int> order(vms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  shuffle(order, rng);

  std::vector<int> used;
  std::vector<int> unused(pms.size());
  for (std::size_t j = 0; j < unused.size(); ++j) unused[j] = static_cast<int>(j);

  HeuristicResult res;
  res.placement = Placement::empty_for(inst);

  auto try_pm = [&](int i, int j) {
    const auto& vm = vms[static_cast<std::size_t>(i)];
    const auto& vt = cat.vm_types[static_cast<std::size_t>(vm.type)];
    const auto jj = static_cast<std::size_t>(j);
    if (!mask[static_cast<std::size_t>(pms[jj].type)][static_cast<std::size_t>(vm.type)]) return false;
    if (cpu[jj] < vt.vcpus || mem[jj] < vt.memory_mib) return false;
    auto pick = place_single_lex(vt.volumes, disks[jj]);
    if (!pick) return false;
    cpu[jj] -= vt.vcpus;
    mem[jj] -= vt.memory_mib;
    for (std::size_t k = 0; k < pick->size(); ++k) disks[jj][static_cast<std::size_t>((*pick)[k])] -= vt.volumes[k];
    res.placement.vm_to_pm[static_cast<std::size_t>(i)] = j;
    res.placement.disk_map[static_cast<std::size_t>(i)] = std::move(*pick);
    return true;
  };

  for (int i : order) {
    bool done = false;
    shuffle(used, rng);
    for (int j : used)
      if (try_pm(i, j)) {
        res.trace.push_back({i, j, false});
        done = true;
        break;
      }
    if (done) continue;
    shuffle(unused, rng);
    for (std::size_t q = 0; q < unused.size(); ++q) {
      const int j = unused[q];
      if (try_pm(i, j)) {
        res.trace.push_back({i, j, true});
        unused.erase(unused.begin() + static_cast<std::ptrdiff_t>(q));
        used.push_back(j);
        done = true;
        break;
      }
    }
    if (!done) {
      res.failed_vm = i;
      return res;
    }
  }
  res.feasible = true;
  res.cost = cost(res.placement, inst);
  res.used_pms = static_cast<std::int64_t>(used.size());
  return res;
}

struct RunRecord {
  std::int64_t run = 0;
  std::uint64_t seed = 0;
  bool feasible = false;
  std::int64_t cost = 0;
  std::int64_t used_pms = 0;
};

// Statistics are over feasible runs; NaN when there are none.
struct RunStats {
  std::vector<RunRecord> runs;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double min = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
  double stddev = std::numeric_limits<double>::quiet_NaN();  // sample
  std::int64_t infeasible = 0;
};

inline RunStats summarize(std::vector<RunRecord> runs) {
  RunStats s;
  s.runs = std::move(runs);
  std::vector<double> c;
  for (const auto& r : s.runs) {
    if (r.feasible) c.push_back(static_cast<double>(r.cost));
    else ++s.infeasible;
  }
  if (c.empty()) return s;
  double sum = 0.0;
  for (double v : c) sum += v;
  s.mean = sum / static_cast<double>(c.size());
  s.min = *std::min_element(c.begin(), c.end());
  s.max = *std::max_element(c.begin(), c.end());
  if (c.size() > 1) {
    double ss = 0.0;
    for (double v : c) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(c.size() - 1));
  }
  return s;
}

// Seeds seed, seed+1, ...; `jobs` only changes wall-clock time.
inline RunStats run_batch(const Instance& inst, const HeuristicParams& params, int jobs = 1) {
  if (params.runs < 1) throw InvalidInput("runs must be >= 1");
  inst.validate();
  std::vector<RunRecord> out(static_cast<std::size_t>(params.runs));
  auto one = [&](std::int64_t r) {
    const std::uint64_t seed = params.seed + static_cast<std::uint64_t>(r);
    auto h = place_randomized(inst, seed);
    out[static_cast<std::size_t>(r)] = {r, seed, h.feasible, h.cost, h.used_pms};
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::int64_t r = 0; r < params.runs; ++r) one(r);
  } else {
    std::vector<std::future<void>> fs;
    for (int w = 0; w < jobs; ++w)
      fs.push_back(std::async(std::launch::async, [&, w] {
        for (std::int64_t r = w; r < params.runs; r += jobs) one(r);
      }));
    for (auto& f : fs) f.get();
  }
  return summarize(std::move(out));
}

}  // namespace anticoloc
