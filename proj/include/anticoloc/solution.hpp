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

// Explicit placements: decoding solver output, validation from raw data,
// cost and utilization.
//
// Placement JSON:
//   { "instance": {...}            optional
//     "assignments": [ {"vm": "m3.medium#0", "pm": "s1#0", "disks": [0]} ] }
// "disks"[k] is the physical disk holding volume k of the VM.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "anticoloc/feasibility.hpp"
#include "anticoloc/io.hpp"
#include "anticoloc/mip/formulations.hpp"
#include "anticoloc/model.hpp"

namespace anticoloc {

// Indices refer to expand_vms / expand_pms of the instance.
struct Placement {
  std::vector<int> vm_to_pm;                // -1: not placed
  std::vector<std::vector<int>> disk_map;   // per VM, per volume

  bool operator==(const Placement&) const = default;

  static Placement empty_for(const Instance& inst) {
    Placement p;
    p.vm_to_pm.assign(static_cast<std::size_t>(inst.num_vms()), -1);
    p.disk_map.assign(static_cast<std::size_t>(inst.num_vms()), {});
    return p;
  }

  std::set<int> used_pms() const {
    std::set<int> s;
    for (int j : vm_to_pm)
      if (j >= 0) s.insert(j);
    return s;
  }
};

inline std::int64_t cost(const Placement& p, const Instance& inst) {
  const auto pms = expand_pms(inst);
  std::int64_t c = 0;
  for (int j : p.used_pms()) c += inst.catalog.pm_types[pms[static_cast<std::size_t>(j)].type].cost;
  return c;
}

struct ValidationReport {
  std::vector<std::string> violations;
  bool valid() const { return violations.empty(); }
};

// Checks every constraint from the raw instance data.
inline ValidationReport validate(const Placement& p, const Instance& inst) {
  ValidationReport rep;
  const auto vms = expand_vms(inst);
  const auto pms = expand_pms(inst);
  const auto& cat = inst.catalog;
  if (p.vm_to_pm.size() != vms.size() || p.disk_map.size() != vms.size()) {
    rep.violations.push_back("placement size does not match the instance");
    return rep;
  }
  std::vector<std::int64_t> cpu(pms.size(), 0), mem(pms.size(), 0);
  std::vector<std::vector<std::int64_t>> load(pms.size());
  for (std::size_t j = 0; j < pms.size(); ++j) load[j].assign(cat.pm_types[pms[j].type].disks.size(), 0);
  for (std::size_t i = 0; i < vms.size(); ++i) {
    const auto vl = label(cat, vms[i]);
    const int j = p.vm_to_pm[i];
    if (j < 0) {
      rep.violations.push_back("unplaced VM " + vl);
      continue;
    }
    if (static_cast<std::size_t>(j) >= pms.size()) {
      rep.violations.push_back("VM " + vl + " on unknown PM");
      continue;
    }
    const auto& vt = cat.vm_types[vms[i].type];
    const auto& pt = cat.pm_types[pms[j].type];
    const auto pl = label(cat, pms[j]);
    if (!inst.policy.allows(pt.name, vt.name)) rep.violations.push_back("policy (" + vl + ", " + pl + ")");
    cpu[j] += vt.vcpus;
    mem[j] += vt.memory_mib;
    const auto& dm = p.disk_map[i];
    if (dm.size() != vt.volumes.size()) {
      rep.violations.push_back("disk map incomplete for " + vl);
      continue;
    }
    std::set<int> seen;
    for (std::size_t k = 0; k < dm.size(); ++k) {
      const int l = dm[k];
      if (l < 0 || static_cast<std::size_t>(l) >= pt.disks.size()) {
        rep.violations.push_back("unknown disk for " + vl + " volume " + std::to_string(k));
        continue;
      }
      if (!seen.insert(l).second)
        rep.violations.push_back("anti-colocation (" + vl + ", " + pl + " disk " + std::to_string(l) + ")");
      load[j][l] += vt.volumes[k];
    }
  }
  for (std::size_t j = 0; j < pms.size(); ++j) {
    const auto& pt = cat.pm_types[pms[j].type];
    const auto pl = label(cat, pms[j]);
    if (cpu[j] > pt.vcpus) rep.violations.push_back("vcpu capacity " + pl);
    if (mem[j] > pt.memory_mib) rep.violations.push_back("memory capacity " + pl);
    for (std::size_t l = 0; l < load[j].size(); ++l)
      if (load[j][l] > pt.disks[l])
        rep.violations.push_back("disk capacity (" + pl + ", disk " + std::to_string(l) + ")");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Utilization: requested over available, per resource.

struct PmUtilization {
  int pm = -1;
  std::string label;
  std::string type;
  double vcpu = 0.0;
  double memory = 0.0;
  double disk_count = 0.0;     // fraction of disks holding at least one volume
  double disk_capacity = 0.0;  // stored GB over total GB
};

struct TypeUtilization {
  std::string type;
  std::int64_t used = 0;
  double vcpu = 0.0;
  double memory = 0.0;
  double disk_count = 0.0;
  double disk_capacity = 0.0;
};

struct UtilizationReport {
  std::vector<PmUtilization> pms;     // used PMs in PM order
  std::vector<TypeUtilization> types;  // PM types with used PMs, catalog order
};

inline UtilizationReport utilization(const Placement& p, const Instance& inst) {
  const auto vms = expand_vms(inst);
  const auto pms = expand_pms(inst);
  const auto& cat = inst.catalog;
  struct Acc {
    std::int64_t cpu = 0, mem = 0, vol = 0, disks_busy = 0;
  };
  std::map<int, Acc> acc;
  std::map<int, std::set<int>> busy;
  for (std::size_t i = 0; i < vms.size(); ++i) {
    const int j = p.vm_to_pm[i];
    if (j < 0) continue;
    const auto& vt = cat.vm_types[vms[i].type];
    auto& a = acc[j];
    a.cpu += vt.vcpus;
    a.mem += vt.memory_mib;
    for (auto s : vt.volumes) a.vol += s;
    for (int l : p.disk_map[i]) busy[j].insert(l);
  }
  UtilizationReport rep;
  std::map<int, std::pair<Acc, Acc>> per_type;  // requested, available
  std::map<int, std::int64_t> used_of_type;
  for (auto& [j, a] : acc) {
    const auto& pt = cat.pm_types[pms[static_cast<std::size_t>(j)].type];
    a.disks_busy = static_cast<std::int64_t>(busy[j].size());
    std::int64_t cap = 0;
    for (auto s : pt.disks) cap += s;
    PmUtilization u;
    u.pm = j;
    u.label = label(cat, pms[static_cast<std::size_t>(j)]);
    u.type = pt.name;
    u.vcpu = static_cast<double>(a.cpu) / pt.vcpus;
    u.memory = static_cast<double>(a.mem) / static_cast<double>(pt.memory_mib);
    u.disk_count = static_cast<double>(a.disks_busy) / static_cast<double>(pt.disks.size());
    u.disk_capacity = static_cast<double>(a.vol) / static_cast<double>(cap);
    rep.pms.push_back(u);
    auto& [req, avail] = per_type[pms[static_cast<std::size_t>(j)].type];
    req.cpu += a.cpu;
    req.mem += a.mem;
    req.vol += a.vol;
    req.disks_busy += a.disks_busy;
    avail.cpu += pt.vcpus;
    avail.mem += pt.memory_mib;
    avail.vol += cap;
    avail.disks_busy += static_cast<std::int64_t>(pt.disks.size());
    ++used_of_type[pms[static_cast<std::size_t>(j)].type];
  }
  for (const auto& [v, ra] : per_type) {
    const auto& [req, avail] = ra;
    rep.types.push_back({cat.pm_types[static_cast<std::size_t>(v)].name, used_of_type[v],
                         static_cast<double>(req.cpu) / static_cast<double>(avail.cpu),
                         static_cast<double>(req.mem) / static_cast<double>(avail.mem),
                         static_cast<double>(req.disks_busy) / static_cast<double>(avail.disks_busy),
                         static_cast<double>(req.vol) / static_cast<double>(avail.vol)});
  }
  return rep;
}

// Used PMs either have a fully used resource or cannot take any VM that
// is still unplaced.
inline bool saturated_or_closed(const Placement& p, const Instance& inst) {
  const auto rep = utilization(p, inst);
  const auto vms = expand_vms(inst);
  const auto pms = expand_pms(inst);
  for (const auto& u : rep.pms) {
    if (u.vcpu >= 1.0 || u.memory >= 1.0 || u.disk_count >= 1.0 || u.disk_capacity >= 1.0) continue;
    VmMultiset mix(inst.catalog.num_vm_types(), 0);
    for (std::size_t i = 0; i < vms.size(); ++i)
      if (p.vm_to_pm[i] == u.pm) ++mix[static_cast<std::size_t>(vms[i].type)];
    const auto& pt = inst.catalog.pm_types[pms[static_cast<std::size_t>(u.pm)].type];
    for (std::size_t i = 0; i < vms.size(); ++i) {
      if (p.vm_to_pm[i] >= 0) continue;
      auto more = mix;
      ++more[static_cast<std::size_t>(vms[i].type)];
      if (inst.policy.allows(pt.name, inst.catalog.vm_types[vms[i].type].name) &&
          config_feasible(inst.catalog, more, pt))
        return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Decoding solver values.

inline constexpr double kDecodeTol = 1e-6;

// Gives each PM's VMs a disk witness computed on the mix actually placed.
inline void assign_disks_from_mix(Placement& p, const Instance& inst, int j) {
  const auto vms = expand_vms(inst);
  const auto pms = expand_pms(inst);
  const auto& cat = inst.catalog;
  VmMultiset mix(cat.num_vm_types(), 0);
  std::vector<std::vector<int>> by_type(cat.num_vm_types());
  for (std::size_t i = 0; i < vms.size(); ++i)
    if (p.vm_to_pm[i] == j) {
      ++mix[static_cast<std::size_t>(vms[i].type)];
      by_type[static_cast<std::size_t>(vms[i].type)].push_back(static_cast<int>(i));
    }
  auto wit = disk_assignment(cat, mix, cat.pm_types[pms[static_cast<std::size_t>(j)].type]);
  if (!wit) throw InternalError("decoded mix on " + label(cat, pms[static_cast<std::size_t>(j)]) + " has no disk assignment");
  for (const auto& vd : wit->vms)
    p.disk_map[static_cast<std::size_t>(by_type[static_cast<std::size_t>(vd.vm_type)][static_cast<std::size_t>(vd.copy)])] = vd.disks;
}

inline Placement decode(const VarMap& map, const Instance& inst, const std::vector<double>& values) {
  if (static_cast<std::int64_t>(values.size()) != map.num_vars())
    throw InvalidInput("solution has " + std::to_string(values.size()) + " values, model has " +
                       std::to_string(map.num_vars()) + " variables");
  std::vector<int> v(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double r = std::round(values[k]);
    if (std::abs(values[k] - r) > kDecodeTol)
      throw InvalidInput("value of variable " + std::to_string(k) + " is not integral");
    v[k] = static_cast<int>(r);
  }
  const auto& cat = inst.catalog;
  Placement p = Placement::empty_for(inst);
  const int n = static_cast<int>(map.vms.size());
  // Direct part.
  for (int i = 0; i < n; ++i)
    for (int j : map.partition.p1) {
      if (v[static_cast<std::size_t>(map.x(i, j))] != 1) continue;
      if (p.vm_to_pm[static_cast<std::size_t>(i)] >= 0) throw InternalError("VM assigned twice in solution");
      p.vm_to_pm[static_cast<std::size_t>(i)] = j;
      const auto& vt = cat.vm_types[map.vms[static_cast<std::size_t>(i)].type];
      const auto& pt = cat.pm_types[map.pms[static_cast<std::size_t>(j)].type];
      auto& dm = p.disk_map[static_cast<std::size_t>(i)];
      dm.assign(vt.volumes.size(), -1);
      for (int k = 0; k < static_cast<int>(vt.volumes.size()); ++k)
        for (int l = 0; l < static_cast<int>(pt.disks.size()); ++l)
          if (v[static_cast<std::size_t>(map.y(i, k, j, l))] == 1) dm[static_cast<std::size_t>(k)] = l;
      for (int l : dm)
        if (l < 0) throw InternalError("volume without a disk in solution");
    }
  // Configured part: fill slots with unplaced VMs in ID order.
  for (int j : map.partition.p2) {
    int chosen = -1;
    for (std::int64_t t = 0; t < map.num_configs(j); ++t)
      if (v[static_cast<std::size_t>(map.gamma(j, static_cast<int>(t)))] == 1) {
        if (chosen >= 0) throw InternalError("PM takes two configurations in solution");
        chosen = static_cast<int>(t);
      }
    if (chosen < 0) continue;
    const auto& set = map.config_set(cat, j);
    for (std::size_t u = 0; u < cat.num_vm_types(); ++u) {
      std::int64_t slots = set.w(static_cast<std::size_t>(chosen), u);
      for (int i = 0; i < n && slots > 0; ++i)
        if (map.vms[static_cast<std::size_t>(i)].type == static_cast<int>(u) && p.vm_to_pm[static_cast<std::size_t>(i)] < 0) {
          p.vm_to_pm[static_cast<std::size_t>(i)] = j;
          --slots;
        }
    }
    assign_disks_from_mix(p, inst, j);
  }
  return p;
}

// Values by variable name (for solutions of exported models).
inline std::vector<double> values_from_names(const LinearModel& model, const std::map<std::string, double>& named) {
  std::unordered_map<std::string, std::size_t> idx;
  idx.reserve(model.vars.size());
  for (std::size_t k = 0; k < model.vars.size(); ++k) idx.emplace(model.vars[k].name, k);
  std::vector<double> v(model.vars.size(), 0.0);
  for (const auto& [name, val] : named) {
    auto it = idx.find(name);
    if (it == idx.end()) throw InvalidInput("solution names unknown variable '" + name + "'");
    v[it->second] = val;
  }
  return v;
}

// ---------------------------------------------------------------------------
// JSON.

inline Json to_json(const Placement& p, const Instance& inst, bool embed_instance = true) {
  const auto vms = expand_vms(inst);
  const auto pms = expand_pms(inst);
  Json a = Json::array();
  for (std::size_t i = 0; i < vms.size(); ++i) {
    if (p.vm_to_pm[i] < 0) continue;
    a.push_back({{"vm", label(inst.catalog, vms[i])},
                 {"pm", label(inst.catalog, pms[static_cast<std::size_t>(p.vm_to_pm[i])])},
                 {"disks", p.disk_map[i]}});
  }
  Json j = {{"assignments", a}};
  if (embed_instance) j["instance"] = to_json(inst);
  return j;
}

namespace detail {

template <typename Id>
std::unordered_map<std::string, int> label_index(const Catalog& cat, const std::vector<Id>& ids) {
  std::unordered_map<std::string, int> m;
  for (std::size_t k = 0; k < ids.size(); ++k) m.emplace(label(cat, ids[k]), static_cast<int>(k));
  return m;
}

}  // namespace detail

inline Placement placement_from_json(const Json& j, const Instance& inst) {
  const auto vms = expand_vms(inst);
  const auto pms = expand_pms(inst);
  const auto vm_idx = detail::label_index(inst.catalog, vms);
  const auto pm_idx = detail::label_index(inst.catalog, pms);
  Placement p = Placement::empty_for(inst);
  if (!j.is_object() || !j.contains("assignments") || !j.at("assignments").is_array())
    throw InvalidInput("placement needs an 'assignments' array");
  for (const auto& a : j.at("assignments")) {
    try {
      const auto vm = a.at("vm").get<std::string>();
      const auto pm = a.at("pm").get<std::string>();
      auto vi = vm_idx.find(vm);
      if (vi == vm_idx.end()) throw InvalidInput("placement names unknown VM '" + vm + "'");
      auto pi = pm_idx.find(pm);
      if (pi == pm_idx.end()) throw InvalidInput("placement names unknown PM '" + pm + "'");
      if (p.vm_to_pm[static_cast<std::size_t>(vi->second)] >= 0)
        throw InvalidInput("VM '" + vm + "' is assigned twice");
      p.vm_to_pm[static_cast<std::size_t>(vi->second)] = pi->second;
      p.disk_map[static_cast<std::size_t>(vi->second)] = a.at("disks").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput(std::string("malformed assignment: ") + e.what());
    }
  }
  return p;
}

}  // namespace anticoloc
