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

// Instance -> configuration sets -> model -> solve -> placement, with the
// choices the CLI exposes.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "anticoloc/config_cache.hpp"
#include "anticoloc/configs.hpp"
#include "anticoloc/mip/formulations.hpp"
#include "anticoloc/model.hpp"
#include "anticoloc/solution.hpp"
#include "anticoloc/solver/mip.hpp"

namespace anticoloc {

inline constexpr std::int64_t kDefaultPartitionThreshold = 1000;

struct PlanOptions {
  // PM types with more configurations go to P1 (COMB only).
  std::int64_t partition_threshold = kDefaultPartitionThreshold;
  // Explicit P1 types for COMB; overrides the threshold.
  std::optional<std::set<std::string>> p1_types;
  // Enumerate only configurations within the instance demand.
  bool demand_capped = false;
  std::int64_t cap = kDefaultConfigCap;
  BuildOptions build;
  const ConfigCache* cache = nullptr;
};

inline std::set<std::string> fleet_types(const Instance& inst) {
  std::set<std::string> out;
  for (std::size_t v = 0; v < inst.catalog.num_pm_types(); ++v)
    if (inst.pm_fleet[v] > 0) out.insert(inst.catalog.pm_types[v].name);
  return out;
}

inline EnumerateOptions enumerate_options(const Instance& inst, const PlanOptions& opt) {
  EnumerateOptions eo;
  eo.cap = opt.cap;
  if (opt.demand_capped) eo.demand_cap = inst.vm_demand;
  return eo;
}

// Configuration counts per fleet type; types over `limit` report nullopt.
inline ConfigCounts config_counts(const Instance& inst, std::int64_t limit, const PlanOptions& opt = {}) {
  ConfigCounts counts;
  auto eo = enumerate_options(inst, opt);
  eo.cap = limit;
  for (const auto& name : fleet_types(inst)) {
    const auto& pt = inst.catalog.pm_types[inst.catalog.pm_index(name)];
    auto r = enumerate_cached(pt, inst.catalog, inst.policy, eo, opt.cache);
    counts[name] = r.cap_exceeded ? std::nullopt : std::optional<std::int64_t>(r.set.size());
  }
  return counts;
}

inline Partition plan_partition(const Instance& inst, Formulation f, const PlanOptions& opt) {
  if (f == Formulation::F1) return all_direct(inst);
  if (f == Formulation::F2) return all_configured(inst);
  if (opt.p1_types) return partition_by_types(inst, *opt.p1_types);
  return choose_partition(inst, config_counts(inst, opt.partition_threshold, opt), opt.partition_threshold);
}

inline BuiltModel build_planned(const Instance& inst, Formulation f, const PlanOptions& opt = {}) {
  const auto part = plan_partition(inst, f, opt);
  ConfigSets sets;
  const auto eo = enumerate_options(inst, opt);
  for (const auto& name : pm_types_of(inst, part.p2)) {
    const auto& pt = inst.catalog.pm_types[inst.catalog.pm_index(name)];
    auto r = enumerate_cached(pt, inst.catalog, inst.policy, eo, opt.cache);
    if (r.cap_exceeded)
      throw SizeLimitExceeded("PM type '" + name + "' exceeds the configuration cap; place it in P1");
    sets[name] = std::move(r.set);
  }
  return build_model(inst, f, part, sets, opt.build);
}

struct SolveOutcome {
  BuiltModel built;
  MipResult mip;
  std::optional<Placement> placement;  // decoded incumbent
};

inline SolveOutcome solve_instance(const Instance& inst, Formulation f, const PlanOptions& opt = {},
                                   MipParams params = {}) {
  SolveOutcome out{build_planned(inst, f, opt), {}, std::nullopt};
  if (params.priority.empty()) params.priority = branching_priority(out.built.map);
  out.mip = solve_mip(out.built.model, params);
  if (out.mip.has_incumbent()) out.placement = decode(out.built.map, inst, out.mip.x);
  return out;
}

}  // namespace anticoloc
