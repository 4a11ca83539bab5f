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

// Domain types of the placement problem: VM and PM classes, the catalog that
// orders them, placement instances and per-PM-type admission policies.
//
// Memory is stored in integer MiB (3.75 GiB == 3840 MiB) and disk sizes in
// integer GB, so every capacity comparison is exact integer arithmetic.
// Memory is only ever compared with memory and disk with disk.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "anticoloc/error.hpp"

namespace anticoloc {

struct VmType {
  std::string name;
  int vcpus = 1;
  std::int64_t memory_mib = 1;
  std::vector<std::int64_t> volumes;  // GB, one entry per virtual disk

  bool operator==(const VmType&) const = default;
};

struct PmType {
  std::string name;
  int vcpus = 1;
  std::int64_t memory_mib = 1;
  std::vector<std::int64_t> disks;  // GB, one entry per physical disk
  std::int64_t cost = 0;

  bool operator==(const PmType&) const = default;
};

// Ordered VM and PM classes. The VM order fixes the dimension order of
// configuration vectors.
struct Catalog {
  std::vector<VmType> vm_types;
  std::vector<PmType> pm_types;

  bool operator==(const Catalog&) const = default;

  std::size_t num_vm_types() const { return vm_types.size(); }
  std::size_t num_pm_types() const { return pm_types.size(); }

  std::optional<std::size_t> find_vm(std::string_view name) const {
    for (std::size_t u = 0; u < vm_types.size(); ++u)
      if (vm_types[u].name == name) return u;
    return std::nullopt;
  }

  std::optional<std::size_t> find_pm(std::string_view name) const {
    for (std::size_t v = 0; v < pm_types.size(); ++v)
      if (pm_types[v].name == name) return v;
    return std::nullopt;
  }

  std::size_t vm_index(std::string_view name) const {
    if (auto u = find_vm(name)) return *u;
    throw InvalidInput("unknown VM type '" + std::string(name) + "'");
  }

  std::size_t pm_index(std::string_view name) const {
    if (auto v = find_pm(name)) return *v;
    throw InvalidInput("unknown PM type '" + std::string(name) + "'");
  }

  void validate() const {
    std::set<std::string> seen;
    for (const auto& t : vm_types) {
      if (t.name.empty()) throw InvalidInput("VM type with empty name");
      if (!seen.insert(t.name).second)
        throw InvalidInput("duplicate VM type '" + t.name + "'");
      if (t.vcpus < 1 || t.memory_mib < 1)
        throw InvalidInput("VM type '" + t.name + "' needs vcpus >= 1 and memory_mib >= 1");
      if (t.volumes.empty())
        throw InvalidInput("VM type '" + t.name + "' has no volumes");
      for (auto s : t.volumes)
        if (s <= 0) throw InvalidInput("VM type '" + t.name + "' has a non-positive volume");
    }
    seen.clear();
    for (const auto& t : pm_types) {
      if (t.name.empty()) throw InvalidInput("PM type with empty name");
      if (!seen.insert(t.name).second)
        throw InvalidInput("duplicate PM type '" + t.name + "'");
      if (t.vcpus < 1 || t.memory_mib < 1)
        throw InvalidInput("PM type '" + t.name + "' needs vcpus >= 1 and memory_mib >= 1");
      if (t.disks.empty()) throw InvalidInput("PM type '" + t.name + "' has no disks");
      for (auto s : t.disks)
        if (s <= 0) throw InvalidInput("PM type '" + t.name + "' has a non-positive disk");
      if (t.cost < 0) throw InvalidInput("PM type '" + t.name + "' has negative cost");
    }
  }
};

// Which VM types each PM type may host. A PM type without an entry admits
// every VM type.
struct Policy {
  std::map<std::string, std::set<std::string>> allowed;

  bool operator==(const Policy&) const = default;

  bool unrestricted() const { return allowed.empty(); }

  bool allows(std::string_view pm_type, std::string_view vm_type) const {
    auto it = allowed.find(std::string(pm_type));
    if (it == allowed.end()) return true;
    return it->second.count(std::string(vm_type)) > 0;
  }

  // mask[v][u] == true iff PM type v may host VM type u.
  std::vector<std::vector<bool>> mask(const Catalog& catalog) const {
    std::vector<std::vector<bool>> m(catalog.num_pm_types(),
                                     std::vector<bool>(catalog.num_vm_types(), true));
    for (std::size_t v = 0; v < catalog.num_pm_types(); ++v)
      for (std::size_t u = 0; u < catalog.num_vm_types(); ++u)
        m[v][u] = allows(catalog.pm_types[v].name, catalog.vm_types[u].name);
    return m;
  }

  void validate(const Catalog& catalog) const {
    for (const auto& [pm, vms] : allowed) {
      catalog.pm_index(pm);
      for (const auto& vm : vms) catalog.vm_index(vm);
    }
  }
};

// Per-type demand and fleet. Individual VMs and PMs are materialized by
// expanding the counts in catalog order, then ordinal order.
struct Instance {
  Catalog catalog;
  std::vector<std::int64_t> vm_demand;  // m_u, indexed like catalog.vm_types
  std::vector<std::int64_t> pm_fleet;   // |Y_v|, indexed like catalog.pm_types
  Policy policy;

  bool operator==(const Instance&) const = default;

  std::int64_t num_vms() const {
    return std::accumulate(vm_demand.begin(), vm_demand.end(), std::int64_t{0});
  }
  std::int64_t num_pms() const {
    return std::accumulate(pm_fleet.begin(), pm_fleet.end(), std::int64_t{0});
  }

  void validate() const {
    catalog.validate();
    if (vm_demand.size() != catalog.num_vm_types())
      throw InvalidInput("vm_demand has wrong dimension");
    if (pm_fleet.size() != catalog.num_pm_types())
      throw InvalidInput("pm_fleet has wrong dimension");
    for (auto c : vm_demand)
      if (c < 0) throw InvalidInput("negative VM count");
    for (auto c : pm_fleet)
      if (c < 0) throw InvalidInput("negative PM count");
    if (num_vms() < 1) throw InvalidInput("instance has no VMs");
    if (num_pms() < 1) throw InvalidInput("instance has no PMs");
    policy.validate(catalog);
  }
};

struct VmId {
  int type = 0;
  int ordinal = 0;
  auto operator<=>(const VmId&) const = default;
};

struct PmId {
  int type = 0;
  int ordinal = 0;
  auto operator<=>(const PmId&) const = default;
};

inline std::vector<VmId> expand_vms(const Instance& inst) {
  std::vector<VmId> out;
  out.reserve(static_cast<std::size_t>(inst.num_vms()));
  for (std::size_t u = 0; u < inst.vm_demand.size(); ++u)
    for (std::int64_t n = 0; n < inst.vm_demand[u]; ++n)
      out.push_back({static_cast<int>(u), static_cast<int>(n)});
  return out;
}

inline std::vector<PmId> expand_pms(const Instance& inst) {
  std::vector<PmId> out;
  out.reserve(static_cast<std::size_t>(inst.num_pms()));
  for (std::size_t v = 0; v < inst.pm_fleet.size(); ++v)
    for (std::int64_t n = 0; n < inst.pm_fleet[v]; ++n)
      out.push_back({static_cast<int>(v), static_cast<int>(n)});
  return out;
}

inline std::string label(const Catalog& c, VmId id) {
  return c.vm_types.at(id.type).name + "#" + std::to_string(id.ordinal);
}

inline std::string label(const Catalog& c, PmId id) {
  return c.pm_types.at(id.type).name + "#" + std::to_string(id.ordinal);
}

// 64-bit FNV-1a; used for cache keys, never for security.
inline std::uint64_t fnv1a(std::string_view bytes,
                           std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) s[static_cast<std::size_t>(i)] = digits[x & 0xf];
  return s;
}

inline std::string digest(const Catalog& c) {
  std::string canon;
  for (const auto& t : c.vm_types) {
    canon += "vm:" + t.name + ":" + std::to_string(t.vcpus) + ":" +
             std::to_string(t.memory_mib);
    for (auto s : t.volumes) canon += ":" + std::to_string(s);
    canon += ";";
  }
  for (const auto& t : c.pm_types) {
    canon += "pm:" + t.name + ":" + std::to_string(t.vcpus) + ":" +
             std::to_string(t.memory_mib) + ":" + std::to_string(t.cost);
    for (auto s : t.disks) canon += ":" + std::to_string(s);
    canon += ";";
  }
  return hex64(fnv1a(canon));
}

// Only the rule for `pm_type` matters when enumerating configurations of
// that type, so the digest can be scoped to one PM type.
inline std::string digest(const Policy& p, std::optional<std::string_view> pm_type = {}) {
  std::string canon;
  for (const auto& [pm, vms] : p.allowed) {
    if (pm_type && pm != *pm_type) continue;
    canon += pm + "=";
    for (const auto& vm : vms) canon += vm + ",";
    canon += ";";
  }
  return hex64(fnv1a(canon));
}

// ---------------------------------------------------------------------------
// Built-in data: the EC2-like VM classes and the assumed PM classes.

namespace detail {
constexpr std::int64_t kMiBPerGiB = 1024;
inline std::int64_t gib_quarters(int quarters) { return quarters * kMiBPerGiB / 4; }
}  // namespace detail

inline Catalog builtin_catalog() {
  using detail::gib_quarters;
  using V = std::vector<std::int64_t>;
  Catalog c;
  // name, vCPU, memory in quarter-GiB, volumes
  c.vm_types = {
      {"m3.medium", 1, gib_quarters(15), V{4}},
      {"m3.large", 2, gib_quarters(30), V{32}},
      {"m3.xlarge", 4, gib_quarters(60), V{40, 40}},
      {"m3.2xlarge", 8, gib_quarters(120), V{80, 80}},
      {"c3.large", 2, gib_quarters(15), V{16, 16}},
      {"c3.xlarge", 4, gib_quarters(30), V{40, 40}},
      {"c3.2xlarge", 8, gib_quarters(60), V{80, 80}},
      {"c3.4xlarge", 16, gib_quarters(120), V{160, 160}},
      {"c3.8xlarge", 32, gib_quarters(240), V{320, 320}},
      {"r3.large", 2, gib_quarters(61), V{32}},
      {"r3.xlarge", 4, gib_quarters(122), V{80}},
      {"r3.2xlarge", 8, gib_quarters(244), V{160}},
      {"r3.4xlarge", 16, gib_quarters(488), V{320}},
      {"r3.8xlarge", 32, gib_quarters(976), V{320, 320}},
      {"i2.xlarge", 4, gib_quarters(122), V{800}},
      {"i2.2xlarge", 8, gib_quarters(244), V(2, 800)},
      {"i2.4xlarge", 16, gib_quarters(488), V(4, 800)},
      {"i2.8xlarge", 32, gib_quarters(976), V(8, 800)},
  };
  const auto gib = [](std::int64_t g) { return g * detail::kMiBPerGiB; };
  c.pm_types = {
      {"s1", 8, gib(16), V(1, 256), 100},
      {"s2", 8, gib(32), V(1, 512), 120},
      {"s3", 8, gib(64), V(2, 512), 200},
      {"s4", 8, gib(64), V(4, 512), 300},
      {"m1", 16, gib(32), V(2, 512), 600},
      {"m2", 16, gib(64), V(4, 512), 700},
      {"m3", 16, gib(128), V(4, 1000), 900},
      {"m4", 16, gib(256), V(8, 1000), 1500},
      {"m5", 16, gib(256), V(16, 512), 1800},
      {"l1", 32, gib(256), V(4, 1000), 2500},
      {"l2", 48, gib(512), V(8, 1000), 3500},
      {"l3", 64, gib(1024), V(4, 1000), 5000},
      {"l4", 80, gib(2048), V(16, 1600), 7000},
      {"l5", 120, gib(4096), V(4, 1000), 9000},
      {"l6", 120, gib(4096), V(24, 1600), 12000},
  };
  return c;
}

// Reservation of large PM types for resource-intensive VM types.
inline Policy large_pm_policy() {
  Policy p;
  const std::set<std::string> l1 = {
      "m3.xlarge",  "m3.2xlarge", "c3.xlarge",  "c3.2xlarge", "c3.4xlarge",
      "c3.8xlarge", "r3.xlarge",  "r3.2xlarge", "r3.4xlarge", "r3.8xlarge",
      "i2.xlarge",  "i2.2xlarge", "i2.4xlarge", "i2.8xlarge"};
  const std::set<std::string> l23 = {
      "m3.2xlarge", "c3.2xlarge", "c3.4xlarge", "c3.8xlarge", "r3.2xlarge",
      "r3.4xlarge", "r3.8xlarge", "i2.2xlarge", "i2.4xlarge", "i2.8xlarge"};
  const std::set<std::string> l456 = {"c3.4xlarge", "c3.8xlarge", "r3.4xlarge",
                                      "r3.8xlarge", "i2.4xlarge", "i2.8xlarge"};
  p.allowed["l1"] = l1;
  p.allowed["l2"] = l23;
  p.allowed["l3"] = l23;
  p.allowed["l4"] = l456;
  p.allowed["l5"] = l456;
  p.allowed["l6"] = l456;
  return p;
}

// Configuration counts reported for the built-in catalog (zero vector
// included). Reference data only: the enumerator computes its own counts.
inline std::map<std::string, std::int64_t> published_config_counts() {
  return {{"s1", 10},   {"s2", 36},   {"s3", 174},  {"s4", 174},  {"m1", 315},
          {"m2", 2113}, {"m3", 4247}, {"m4", 4247}, {"m5", 3199}};
}

inline const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids = {"I", "II", "III", "IV", "V", "VI", "VII"};
  return ids;
}

// The experiment setups, cell by cell. Experiments V-VII carry the large-PM
// reservation policy.
inline Instance preset_instance(std::string_view id) {
  Instance inst;
  inst.catalog = builtin_catalog();
  const auto& cat = inst.catalog;
  inst.vm_demand.assign(cat.num_vm_types(), 0);
  inst.pm_fleet.assign(cat.num_pm_types(), 0);
  auto vm = [&](const char* name, std::int64_t n) { inst.vm_demand[cat.vm_index(name)] = n; };
  auto pm = [&](const char* name, std::int64_t n) { inst.pm_fleet[cat.pm_index(name)] = n; };

  if (id == "I") {
    vm("m3.medium", 36); vm("m3.large", 14); vm("m3.xlarge", 10); vm("m3.2xlarge", 10);
    pm("s1", 7); pm("s2", 7); pm("s3", 10); pm("s4", 7);
    pm("m1", 5); pm("m2", 5); pm("m3", 5); pm("m4", 2); pm("m5", 2);
  } else if (id == "II") {
    for (const char* n : {"m3.medium", "m3.large", "m3.xlarge", "m3.2xlarge", "c3.large",
                          "c3.xlarge", "c3.2xlarge", "c3.4xlarge", "c3.8xlarge", "r3.large",
                          "r3.xlarge", "r3.2xlarge", "r3.4xlarge", "r3.8xlarge"})
      vm(n, 5);
    vm("i2.xlarge", 2); vm("i2.2xlarge", 2); vm("i2.4xlarge", 3);
    for (const char* n : {"s1", "s2", "s3", "s4", "m1", "m2", "m3", "m4", "m5",
                          "l1", "l2", "l3", "l4", "l5"})
      pm(n, 5);
  } else if (id == "III" || id == "IV") {
    vm("m3.medium", 500); vm("m3.large", 200); vm("m3.xlarge", 150); vm("m3.2xlarge", 150);
    pm("s1", 150); pm("s2", 150); pm("s3", 150); pm("s4", 150);
    pm("m1", 100); pm("m2", 100); pm("m3", 100); pm("m4", 50); pm("m5", 50);
    if (id == "IV") {
      for (const char* n : {"c3.large", "c3.xlarge", "c3.2xlarge", "c3.4xlarge", "c3.8xlarge"})
        vm(n, 2);
      for (const char* n : {"l1", "l2", "l3", "l4", "l5", "l6"}) pm(n, 2);
    }
  } else if (id == "V") {
    vm("m3.large", 4000); vm("m3.xlarge", 2000);
    vm("c3.4xlarge", 3); vm("c3.8xlarge", 3); vm("r3.4xlarge", 3); vm("r3.8xlarge", 3);
    vm("i2.2xlarge", 3); vm("i2.4xlarge", 3); vm("i2.8xlarge", 2);
    pm("s1", 300); pm("s2", 300); pm("s3", 300); pm("s4", 300);
    pm("m1", 200); pm("m2", 200); pm("m3", 200); pm("m4", 100); pm("m5", 100);
    for (const char* n : {"l1", "l2", "l3", "l4", "l5", "l6"}) pm(n, 2);
    inst.policy = large_pm_policy();
  } else if (id == "VI") {
    for (const char* n : {"m3.2xlarge", "c3.4xlarge", "c3.8xlarge", "r3.8xlarge",
                          "i2.2xlarge", "i2.4xlarge", "i2.8xlarge"})
      vm(n, 15);
    for (const char* n : {"m1", "m2", "m3", "m4", "m5"}) pm(n, 10);
    for (const char* n : {"l1", "l2", "l3", "l4", "l5"}) pm(n, 5);
    pm("l6", 2);
    inst.policy = large_pm_policy();
  } else if (id == "VII") {
    vm("m3.medium", 1875); vm("m3.large", 750); vm("m3.xlarge", 563); vm("m3.2xlarge", 562);
    vm("c3.large", 600); vm("c3.xlarge", 600); vm("c3.2xlarge", 150);
    vm("c3.4xlarge", 75); vm("c3.8xlarge", 75);
    vm("r3.large", 600); vm("r3.xlarge", 600); vm("r3.2xlarge", 150);
    vm("r3.4xlarge", 150); vm("r3.8xlarge", 75);
    vm("i2.xlarge", 300); vm("i2.2xlarge", 300); vm("i2.4xlarge", 75); vm("i2.8xlarge", 75);
    for (const char* n : {"s1", "s2", "s3", "s4"}) pm(n, 900);
    pm("m1", 450);
    for (const char* n : {"m2", "m3", "m4", "m5"}) pm(n, 375);
    for (const char* n : {"l1", "l2", "l3", "l4", "l5", "l6"}) pm(n, 75);
    inst.policy = large_pm_policy();
  } else {
    throw InvalidInput("unknown experiment preset '" + std::string(id) + "'");
  }
  return inst;
}

}  // namespace anticoloc
