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

// The three MIP formulations of the placement problem.
//
//   F1    direct assignment: x (VM to PM), y (volume to physical disk), z.
//   F2    configuration choice: g (PM takes configuration t), z.
//   COMB  direct assignment on the PMs of P1, configurations on P2.
//
// Variable order is x, y, g, z. Rows follow the order of the model
// statement; every row family has a fixed name prefix:
//   yx   y <= x                 vd    each volume placed once
//   one  each VM on one PM      anti  one volume of a VM per disk
//   dcap disk capacity          cpu, mem  PM capacities
//   zlo  z <= sum               zhi   B z >= sum
//   cfg  one configuration      cover demand met per VM type

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "anticoloc/configs.hpp"
#include "anticoloc/io.hpp"
#include "anticoloc/mip/linear_model.hpp"
#include "anticoloc/model.hpp"

namespace anticoloc {

enum class Formulation { F1, F2, COMB };

inline const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::F1: return "f1";
    case Formulation::F2: return "f2";
    default: return "comb";
  }
}

inline Formulation parse_formulation(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "f1") return Formulation::F1;
  if (s == "f2") return Formulation::F2;
  if (s == "comb") return Formulation::COMB;
  throw InvalidInput("unknown formulation '" + s + "' (expected f1, f2 or comb)");
}

// Configuration sets keyed by PM type name.
using ConfigSets = std::map<std::string, ConfigSet>;

// Per-PM-type configuration counts; nullopt marks a type over the cap.
using ConfigCounts = std::map<std::string, std::optional<std::int64_t>>;

// Split of the expanded PM list (indices into expand_pms) into the direct
// part P1 and the configuration part P2. Both ascending.
struct Partition {
  std::vector<int> p1;
  std::vector<int> p2;

  bool operator==(const Partition&) const = default;
};

inline Partition partition_by_types(const Instance& inst, const std::set<std::string>& p1_types) {
  for (const auto& t : p1_types) inst.catalog.pm_index(t);
  Partition part;
  const auto pms = expand_pms(inst);
  for (std::size_t j = 0; j < pms.size(); ++j) {
    if (p1_types.count(inst.catalog.pm_types[pms[j].type].name))
      part.p1.push_back(static_cast<int>(j));
    else
      part.p2.push_back(static_cast<int>(j));
  }
  return part;
}

inline Partition all_direct(const Instance& inst) {
  Partition p;
  for (int j = 0; j < inst.num_pms(); ++j) p.p1.push_back(j);
  return p;
}

inline Partition all_configured(const Instance& inst) {
  Partition p;
  for (int j = 0; j < inst.num_pms(); ++j) p.p2.push_back(j);
  return p;
}

inline void check_partition(const Instance& inst, const Partition& part) {
  const auto m = static_cast<std::size_t>(inst.num_pms());
  std::vector<int> seen(m, 0);
  for (const auto* side : {&part.p1, &part.p2})
    for (std::size_t i = 0; i < side->size(); ++i) {
      int j = (*side)[i];
      if (j < 0 || static_cast<std::size_t>(j) >= m) throw InvalidInput("partition names an unknown PM");
      if (i > 0 && (*side)[i - 1] >= j) throw InvalidInput("partition lists must be ascending");
      ++seen[static_cast<std::size_t>(j)];
    }
  for (auto s : seen)
    if (s != 1) throw InvalidInput("partition must cover every PM exactly once");
}

// PM types whose configuration count is over the cap or above `threshold`
// go to P1 with all their PMs; the rest go to P2.
inline Partition choose_partition(const Instance& inst, const ConfigCounts& counts,
                                  std::int64_t threshold) {
  if (threshold < 1) throw InvalidInput("partition threshold must be >= 1");
  std::set<std::string> direct;
  for (std::size_t v = 0; v < inst.catalog.num_pm_types(); ++v) {
    const auto& name = inst.catalog.pm_types[v].name;
    if (inst.pm_fleet[v] == 0) continue;
    auto it = counts.find(name);
    if (it == counts.end()) throw InvalidInput("no configuration count for PM type '" + name + "'");
    if (!it->second || *it->second > threshold) direct.insert(name);
  }
  return partition_by_types(inst, direct);
}

struct BuildOptions {
  // Use B = 1 in the configuration z-links (valid since at most one
  // configuration is chosen per PM). Off: B = N everywhere.
  bool tight_config_link = false;
};

// Semantics of one model variable.
struct VarInfo {
  char family = '?';  // 'x', 'y', 'g' or 'z'
  int vm = -1;        // index into expand_vms
  int volume = -1;
  int pm = -1;  // index into expand_pms
  int disk = -1;
  int config = -1;

  bool operator==(const VarInfo&) const = default;
};

// Index layout of a built model: maps placement semantics to variable
// indices and back.
class VarMap {
 public:
  Formulation formulation = Formulation::F1;
  std::vector<VmId> vms;
  std::vector<PmId> pms;
  Partition partition;
  ConfigSets configs;  // sets used by the PMs of P2
  BuildOptions options;

  static VarMap layout(const Instance& inst, Formulation f, const Partition& part,
                       const ConfigSets& sets, const BuildOptions& opt = {}) {
    check_partition(inst, part);
    VarMap m;
    m.formulation = f;
    m.vms = expand_vms(inst);
    m.pms = expand_pms(inst);
    m.partition = part;
    m.options = opt;
    const auto& cat = inst.catalog;
    m.p1_pos_.assign(m.pms.size(), -1);
    for (std::size_t a = 0; a < part.p1.size(); ++a) m.p1_pos_[part.p1[a]] = static_cast<int>(a);
    m.vol_offset_.assign(m.vms.size() + 1, 0);
    for (std::size_t i = 0; i < m.vms.size(); ++i)
      m.vol_offset_[i + 1] =
          m.vol_offset_[i] + static_cast<std::int64_t>(cat.vm_types[m.vms[i].type].volumes.size());
    m.disk_offset_.assign(part.p1.size() + 1, 0);
    for (std::size_t a = 0; a < part.p1.size(); ++a)
      m.disk_offset_[a + 1] =
          m.disk_offset_[a] +
          static_cast<std::int64_t>(cat.pm_types[m.pms[part.p1[a]].type].disks.size());
    std::int64_t next = 0;
    m.x_first_ = next;
    next += static_cast<std::int64_t>(m.vms.size() * part.p1.size());
    m.y_first_ = next;
    next += m.total_volumes() * m.direct_disks();
    m.gamma_first_.assign(m.pms.size(), -1);
    m.gamma_count_.assign(m.pms.size(), 0);
    for (int j : part.p2) {
      const auto& name = cat.pm_types[m.pms[j].type].name;
      auto it = sets.find(name);
      if (it == sets.end()) throw InvalidInput("missing configuration set for PM type '" + name + "'");
      m.configs[name] = it->second;
      m.gamma_first_[j] = next;
      m.gamma_count_[j] = static_cast<std::int64_t>(it->second.size());
      next += m.gamma_count_[j];
    }
    m.z_first_ = next;
    next += static_cast<std::int64_t>(m.pms.size());
    if (next > std::numeric_limits<int>::max()) throw SizeLimitExceeded("model has too many variables");
    m.num_vars_ = next;
    return m;
  }

  std::int64_t num_vars() const { return num_vars_; }
  std::int64_t total_volumes() const { return vol_offset_.back(); }
  std::int64_t direct_disks() const { return disk_offset_.back(); }
  int p1_position(int j) const { return p1_pos_[static_cast<std::size_t>(j)]; }
  bool is_direct(int j) const { return p1_pos_[static_cast<std::size_t>(j)] >= 0; }
  std::int64_t num_configs(int j) const { return gamma_count_[static_cast<std::size_t>(j)]; }
  const ConfigSet& config_set(const Catalog& cat, int j) const {
    return configs.at(cat.pm_types[pms[j].type].name);
  }

  int x(int i, int j) const {
    const int a = p1_pos_[static_cast<std::size_t>(j)];
    return static_cast<int>(x_first_ + static_cast<std::int64_t>(i) * static_cast<std::int64_t>(partition.p1.size()) + a);
  }
  int y(int i, int k, int j, int l) const {
    const int a = p1_pos_[static_cast<std::size_t>(j)];
    return static_cast<int>(y_first_ + (vol_offset_[i] + k) * direct_disks() + disk_offset_[a] + l);
  }
  int gamma(int j, int t) const { return static_cast<int>(gamma_first_[static_cast<std::size_t>(j)] + t); }
  int z(int j) const { return static_cast<int>(z_first_ + j); }

  VarInfo describe(int var) const {
    const std::int64_t v = var;
    if (v < 0 || v >= num_vars_) throw InvalidInput("variable index out of range");
    VarInfo info;
    if (v >= z_first_) {
      info.family = 'z';
      info.pm = static_cast<int>(v - z_first_);
      return info;
    }
    if (v >= y_first_ + total_volumes() * direct_disks()) {
      info.family = 'g';
      // P2 PMs occupy consecutive ranges in P2 order.
      auto it = std::upper_bound(partition.p2.begin(), partition.p2.end(), v,
                                 [&](std::int64_t val, int j) { return val < gamma_first_[j]; });
      info.pm = *(it - 1);
      info.config = static_cast<int>(v - gamma_first_[info.pm]);
      return info;
    }
    if (v >= y_first_) {
      info.family = 'y';
      const std::int64_t r = v - y_first_;
      const std::int64_t slot = r / direct_disks();
      const std::int64_t d = r % direct_disks();
      auto vi = std::upper_bound(vol_offset_.begin(), vol_offset_.end(), slot) - vol_offset_.begin() - 1;
      info.vm = static_cast<int>(vi);
      info.volume = static_cast<int>(slot - vol_offset_[vi]);
      auto da = std::upper_bound(disk_offset_.begin(), disk_offset_.end(), d) - disk_offset_.begin() - 1;
      info.pm = partition.p1[static_cast<std::size_t>(da)];
      info.disk = static_cast<int>(d - disk_offset_[da]);
      return info;
    }
    info.family = 'x';
    const auto n1 = static_cast<std::int64_t>(partition.p1.size());
    info.vm = static_cast<int>((v - x_first_) / n1);
    info.pm = partition.p1[static_cast<std::size_t>((v - x_first_) % n1)];
    return info;
  }

 private:
  std::vector<int> p1_pos_;
  std::vector<std::int64_t> vol_offset_;
  std::vector<std::int64_t> disk_offset_;
  std::vector<std::int64_t> gamma_first_;
  std::vector<std::int64_t> gamma_count_;
  std::int64_t x_first_ = 0, y_first_ = 0, z_first_ = 0, num_vars_ = 0;
};

namespace detail {

inline std::string id_str(VmId v) { return std::to_string(v.type) + "_" + std::to_string(v.ordinal); }
inline std::string id_str(PmId p) { return std::to_string(p.type) + "_" + std::to_string(p.ordinal); }

class ModelBuilder {
 public:
  ModelBuilder(const Instance& inst, const VarMap& map) : inst_(inst), map_(map) {}

  LinearModel build() {
    const Formulation f = map_.formulation;
    model_.name = std::string("anticoloc_") + to_string(f);
    declare_vars();
    const bool direct = !map_.partition.p1.empty();
    const bool configured = !map_.partition.p2.empty();
    if (direct) direct_rows(f == Formulation::COMB);
    if (f == Formulation::F2) {
      cfg_rows();
      cover_rows();
      z_config_rows();
    } else if (f == Formulation::COMB) {
      if (configured) {
        cfg_rows();
        z_config_rows();
      }
      cover_rows();
    }
    std::vector<Term> obj;
    for (std::size_t j = 0; j < map_.pms.size(); ++j)
      obj.push_back({map_.z(static_cast<int>(j)),
                     static_cast<double>(inst_.catalog.pm_types[map_.pms[j].type].cost)});
    model_.set_objective(std::move(obj));
    return std::move(model_);
  }

 private:
  const Catalog& cat() const { return inst_.catalog; }
  int n_vms() const { return static_cast<int>(map_.vms.size()); }
  const std::vector<std::int64_t>& vols(int i) const { return cat().vm_types[map_.vms[i].type].volumes; }
  const PmType& pm_type(int j) const { return cat().pm_types[map_.pms[j].type]; }
  double big_m() const { return static_cast<double>(inst_.num_vms()); }

  void declare_vars() {
    const auto& p1 = map_.partition.p1;
    const auto mask = inst_.policy.mask(cat());
    model_.vars.reserve(static_cast<std::size_t>(map_.num_vars()));
    for (int i = 0; i < n_vms(); ++i)
      for (int j : p1) {
        const bool allowed = mask[map_.pms[j].type][map_.vms[i].type];
        model_.add_var("x_i" + id_str(map_.vms[i]) + "_j" + id_str(map_.pms[j]), 0.0,
                       allowed ? 1.0 : 0.0, VarKind::Binary);
      }
    for (int i = 0; i < n_vms(); ++i)
      for (int k = 0; k < static_cast<int>(vols(i).size()); ++k)
        for (int j : p1)
          for (int l = 0; l < static_cast<int>(pm_type(j).disks.size()); ++l)
            model_.add_var("y_i" + id_str(map_.vms[i]) + "_k" + std::to_string(k) + "_j" +
                               id_str(map_.pms[j]) + "_l" + std::to_string(l),
                           0.0, 1.0, VarKind::Binary);
    for (int j : map_.partition.p2)
      for (std::int64_t t = 0; t < map_.num_configs(j); ++t)
        model_.add_var("g_j" + id_str(map_.pms[j]) + "_t" + std::to_string(t), 0.0, 1.0,
                       VarKind::Binary);
    for (std::size_t j = 0; j < map_.pms.size(); ++j)
      model_.add_var("z_j" + id_str(map_.pms[j]), 0.0, 1.0, VarKind::Binary);
    if (static_cast<std::int64_t>(model_.vars.size()) != map_.num_vars())
      throw InternalError("variable layout mismatch");
  }

  void direct_rows(bool comb) {
    const auto& p1 = map_.partition.p1;
    // y <= x
    for (int i = 0; i < n_vms(); ++i)
      for (int k = 0; k < static_cast<int>(vols(i).size()); ++k)
        for (int j : p1)
          for (int l = 0; l < static_cast<int>(pm_type(j).disks.size()); ++l)
            model_.add_row("yx_i" + id_str(map_.vms[i]) + "_k" + std::to_string(k) + "_j" +
                               id_str(map_.pms[j]) + "_l" + std::to_string(l),
                           {{map_.y(i, k, j, l), 1.0}, {map_.x(i, j), -1.0}}, Sense::LE, 0.0);
    // every volume on exactly one disk (of the PM the VM uses, in COMB)
    for (int i = 0; i < n_vms(); ++i)
      for (int k = 0; k < static_cast<int>(vols(i).size()); ++k) {
        std::vector<Term> t;
        for (int j : p1)
          for (int l = 0; l < static_cast<int>(pm_type(j).disks.size()); ++l)
            t.push_back({map_.y(i, k, j, l), 1.0});
        if (comb)
          for (int j : p1) t.push_back({map_.x(i, j), -1.0});
        model_.add_row("vd_i" + id_str(map_.vms[i]) + "_k" + std::to_string(k), std::move(t),
                       Sense::EQ, comb ? 0.0 : 1.0);
      }
    for (int i = 0; i < n_vms(); ++i) {
      std::vector<Term> t;
      for (int j : p1) t.push_back({map_.x(i, j), 1.0});
      model_.add_row("one_i" + id_str(map_.vms[i]), std::move(t), comb ? Sense::LE : Sense::EQ, 1.0);
    }
    for (int i = 0; i < n_vms(); ++i)
      for (int j : p1)
        for (int l = 0; l < static_cast<int>(pm_type(j).disks.size()); ++l) {
          std::vector<Term> t;
          for (int k = 0; k < static_cast<int>(vols(i).size()); ++k) t.push_back({map_.y(i, k, j, l), 1.0});
          model_.add_row("anti_i" + id_str(map_.vms[i]) + "_j" + id_str(map_.pms[j]) + "_l" +
                             std::to_string(l),
                         std::move(t), Sense::LE, 1.0);
        }
    for (int j : p1)
      for (int l = 0; l < static_cast<int>(pm_type(j).disks.size()); ++l) {
        std::vector<Term> t;
        for (int i = 0; i < n_vms(); ++i)
          for (int k = 0; k < static_cast<int>(vols(i).size()); ++k)
            t.push_back({map_.y(i, k, j, l), static_cast<double>(vols(i)[k])});
        model_.add_row("dcap_j" + id_str(map_.pms[j]) + "_l" + std::to_string(l), std::move(t),
                       Sense::LE, static_cast<double>(pm_type(j).disks[l]));
      }
    auto per_pm = [&](const char* prefix, auto coef, auto rhs) {
      for (int j : p1) {
        std::vector<Term> t;
        for (int i = 0; i < n_vms(); ++i) t.push_back({map_.x(i, j), coef(i)});
        model_.add_row(prefix + id_str(map_.pms[j]), std::move(t), Sense::LE, rhs(j));
      }
    };
    per_pm("cpu_j", [&](int i) { return static_cast<double>(cat().vm_types[map_.vms[i].type].vcpus); },
           [&](int j) { return static_cast<double>(pm_type(j).vcpus); });
    per_pm("mem_j", [&](int i) { return static_cast<double>(cat().vm_types[map_.vms[i].type].memory_mib); },
           [&](int j) { return static_cast<double>(pm_type(j).memory_mib); });
    for (int j : p1) {
      std::vector<Term> t{{map_.z(j), 1.0}};
      for (int i = 0; i < n_vms(); ++i) t.push_back({map_.x(i, j), -1.0});
      model_.add_row("zlo_j" + id_str(map_.pms[j]), std::move(t), Sense::LE, 0.0);
    }
    for (int j : p1) {
      std::vector<Term> t{{map_.z(j), big_m()}};
      for (int i = 0; i < n_vms(); ++i) t.push_back({map_.x(i, j), -1.0});
      model_.add_row("zhi_j" + id_str(map_.pms[j]), std::move(t), Sense::GE, 0.0);
    }
  }

  std::vector<Term> gammas(int j, double sign) const {
    std::vector<Term> t;
    for (std::int64_t c = 0; c < map_.num_configs(j); ++c)
      t.push_back({map_.gamma(j, static_cast<int>(c)), sign});
    return t;
  }

  void cfg_rows() {
    for (int j : map_.partition.p2)
      model_.add_row("cfg_j" + id_str(map_.pms[j]), gammas(j, 1.0), Sense::LE, 1.0);
  }

  void z_config_rows() {
    const double b = map_.options.tight_config_link ? 1.0 : big_m();
    for (int j : map_.partition.p2) {
      auto t = gammas(j, -1.0);
      t.push_back({map_.z(j), 1.0});
      model_.add_row("zlo_j" + id_str(map_.pms[j]), std::move(t), Sense::LE, 0.0);
    }
    for (int j : map_.partition.p2) {
      auto t = gammas(j, -1.0);
      t.push_back({map_.z(j), b});
      model_.add_row("zhi_j" + id_str(map_.pms[j]), std::move(t), Sense::GE, 0.0);
    }
  }

  // One row per catalog VM type, including types without demand.
  void cover_rows() {
    const std::size_t nu = cat().num_vm_types();
    std::vector<std::vector<Term>> rows(nu);
    for (int j : map_.partition.p2) {
      const auto& set = map_.config_set(cat(), j);
      for (std::size_t t = 0; t < set.size(); ++t)
        for (std::size_t u = 0; u < nu; ++u)
          if (set.w(t, u) != 0)
            rows[u].push_back({map_.gamma(j, static_cast<int>(t)), static_cast<double>(set.w(t, u))});
    }
    for (int i = 0; i < n_vms(); ++i)
      for (int j : map_.partition.p1) rows[static_cast<std::size_t>(map_.vms[i].type)].push_back({map_.x(i, j), 1.0});
    for (std::size_t u = 0; u < nu; ++u)
      model_.add_row("cover_u" + std::to_string(u), std::move(rows[u]), Sense::GE,
                     static_cast<double>(inst_.vm_demand[u]));
  }

  const Instance& inst_;
  const VarMap& map_;
  LinearModel model_;
};

}  // namespace detail

struct BuiltModel {
  LinearModel model;
  VarMap map;
};

inline BuiltModel build_model(const Instance& inst, Formulation f, const Partition& part,
                              const ConfigSets& sets, const BuildOptions& opt = {}) {
  inst.validate();
  if (f == Formulation::F1 && !part.p2.empty()) throw InvalidInput("F1 places every PM directly");
  if (f == Formulation::F2 && !part.p1.empty()) throw InvalidInput("F2 configures every PM");
  BuiltModel b{{}, VarMap::layout(inst, f, part, sets, opt)};
  b.model = detail::ModelBuilder(inst, b.map).build();
  return b;
}

inline BuiltModel build_f1(const Instance& inst) {
  return build_model(inst, Formulation::F1, all_direct(inst), {});
}

inline BuiltModel build_f2(const Instance& inst, const ConfigSets& sets, const BuildOptions& opt = {}) {
  return build_model(inst, Formulation::F2, all_configured(inst), sets, opt);
}

inline BuiltModel build_comb(const Instance& inst, const Partition& part, const ConfigSets& sets,
                             const BuildOptions& opt = {}) {
  return build_model(inst, Formulation::COMB, part, sets, opt);
}

// Enumerates configuration sets for the PM types that occur in `pm_types`
// (types without PMs are skipped). Throws if a type exceeds the cap.
inline ConfigSets config_sets_for(const Instance& inst, const std::set<std::string>& pm_types,
                                  const EnumerateOptions& opt = {}) {
  ConfigSets sets;
  for (const auto& name : pm_types) {
    const auto v = inst.catalog.pm_index(name);
    if (inst.pm_fleet[v] == 0) continue;
    auto r = enumerate(inst.catalog.pm_types[v], inst.catalog, inst.policy, opt);
    if (r.cap_exceeded)
      throw SizeLimitExceeded("PM type '" + name + "' exceeds the configuration cap; place it in P1");
    sets[name] = std::move(r.set);
  }
  return sets;
}

inline std::set<std::string> pm_types_of(const Instance& inst, const std::vector<int>& pms) {
  std::set<std::string> out;
  const auto all = expand_pms(inst);
  for (int j : pms) out.insert(inst.catalog.pm_types[all[static_cast<std::size_t>(j)].type].name);
  return out;
}

// Branching priorities for solve_mip: PM opening first, then assignments
// and configurations, disks last (they follow from the rest).
inline std::vector<int> branching_priority(const VarMap& map) {
  std::vector<int> p(static_cast<std::size_t>(map.num_vars()), 0);
  for (std::int64_t v = 0; v < map.num_vars(); ++v) {
    const char f = map.describe(static_cast<int>(v)).family;
    p[static_cast<std::size_t>(v)] = f == 'z' ? 2 : f == 'y' ? 0 : 1;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Closed-form model size.

struct SizeReport {
  std::int64_t variables = 0;
  std::int64_t constraints = 0;
  std::map<std::string, std::int64_t> var_families;  // x, y, g, z
  std::map<std::string, std::int64_t> row_families;  // by row-name prefix

  bool operator==(const SizeReport&) const = default;
};

inline SizeReport estimate_size(const Instance& inst, Formulation f, const Partition& part,
                                const ConfigCounts& counts) {
  check_partition(inst, part);
  if (f == Formulation::F1 && !part.p2.empty()) throw InvalidInput("F1 places every PM directly");
  if (f == Formulation::F2 && !part.p1.empty()) throw InvalidInput("F2 configures every PM");
  const auto& cat = inst.catalog;
  const auto pms = expand_pms(inst);
  std::int64_t n = inst.num_vms(), m = inst.num_pms(), vols = 0, d1 = 0, gam = 0;
  for (std::size_t u = 0; u < cat.num_vm_types(); ++u)
    vols += inst.vm_demand[u] * static_cast<std::int64_t>(cat.vm_types[u].volumes.size());
  for (int j : part.p1) d1 += static_cast<std::int64_t>(cat.pm_types[pms[j].type].disks.size());
  for (int j : part.p2) {
    const auto& name = cat.pm_types[pms[j].type].name;
    auto it = counts.find(name);
    if (it == counts.end() || !it->second)
      throw InvalidInput("no finite configuration count for PM type '" + name + "'");
    gam += *it->second;
  }
  const auto p1 = static_cast<std::int64_t>(part.p1.size());
  const auto p2 = static_cast<std::int64_t>(part.p2.size());
  SizeReport r;
  auto var = [&](const char* k, std::int64_t c) { if (c) r.var_families[k] = c; };
  auto row = [&](const char* k, std::int64_t c) { if (c) r.row_families[k] += c; };
  var("x", n * p1);
  var("y", vols * d1);
  var("g", gam);
  var("z", m);
  if (p1 > 0) {
    row("yx", vols * d1);
    row("vd", vols);
    row("one", n);
    row("anti", n * d1);
    row("dcap", d1);
    row("cpu", p1);
    row("mem", p1);
    row("zlo", p1);
    row("zhi", p1);
  }
  if (p2 > 0) {
    row("cfg", p2);
    row("zlo", p2);
    row("zhi", p2);
  }
  if (f != Formulation::F1) row("cover", static_cast<std::int64_t>(cat.num_vm_types()));
  for (const auto& [k, c] : r.var_families) r.variables += c;
  for (const auto& [k, c] : r.row_families) r.constraints += c;
  return r;
}

inline SizeReport measure(const LinearModel& m) {
  SizeReport r;
  r.var_families = var_families(m);
  r.row_families = row_families(m);
  r.variables = static_cast<std::int64_t>(m.vars.size());
  r.constraints = static_cast<std::int64_t>(m.rows.size());
  return r;
}

// ---------------------------------------------------------------------------
// Variable-map files: enough to rebuild the layout and decode a solution.

inline Json to_json(const VarMap& map, const Instance& inst) {
  Json sets = Json::object();
  for (const auto& [name, s] : map.configs)
    sets[name] = {{"includes_zero", s.includes_zero}, {"policy_tag", s.policy_tag}, {"configs", s.configs}};
  return {{"formulation", to_string(map.formulation)},
          {"instance", to_json(inst)},
          {"p1", map.partition.p1},
          {"p2", map.partition.p2},
          {"tight_config_link", map.options.tight_config_link},
          {"config_sets", sets}};
}

struct LoadedVarMap {
  Instance instance;
  VarMap map;
};

inline LoadedVarMap varmap_from_json(const Json& j) {
  try {
    LoadedVarMap out;
    out.instance = instance_from_json(j.at("instance"));
    Partition part{j.at("p1").get<std::vector<int>>(), j.at("p2").get<std::vector<int>>()};
    ConfigSets sets;
    for (const auto& [name, s] : j.at("config_sets").items()) {
      ConfigSet cs;
      cs.pm_type = name;
      cs.includes_zero = s.at("includes_zero").get<bool>();
      cs.policy_tag = s.at("policy_tag").get<std::string>();
      cs.configs = s.at("configs").get<std::vector<VmMultiset>>();
      sets[name] = std::move(cs);
    }
    BuildOptions opt{j.value("tight_config_link", false)};
    out.map = VarMap::layout(out.instance, parse_formulation(j.at("formulation").get<std::string>()),
                             part, sets, opt);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed variable map: ") + e.what());
  }
}

}  // namespace anticoloc
