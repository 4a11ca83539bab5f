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

// Exact single-PM feasibility: scalar capacities plus the disk
// anti-colocation matching problem, with a constructive witness.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "anticoloc/error.hpp"
#include "anticoloc/model.hpp"

namespace anticoloc {

// Per-VM-type counts hosted by one PM (a configuration vector).
using VmMultiset = std::vector<std::int64_t>;

// Disk choice of one placed VM: disks[k] is the physical disk of volume k.
struct VmDisks {
  int vm_type = 0;
  int copy = 0;  // 0-based copy among VMs of the same type in the mix
  std::vector<int> disks;

  bool operator==(const VmDisks&) const = default;
};

// Placed VMs in (type, copy) order.
struct DiskWitness {
  std::vector<VmDisks> vms;

  bool operator==(const DiskWitness&) const = default;
};

struct DiskSearchOptions {
  // Cache failed states at VM boundaries. The cache lives for one call.
  bool memo = true;
  std::size_t memo_limit = 1u << 18;
};

namespace detail {

inline void check_dimension(const Catalog& catalog, const VmMultiset& mix) {
  if (mix.size() != catalog.num_vm_types())
    throw InvalidInput("mix has dimension " + std::to_string(mix.size()) + ", catalog has " +
                       std::to_string(catalog.num_vm_types()) + " VM types");
  for (auto c : mix)
    if (c < 0) throw InvalidInput("mix has a negative count");
}

// Backtracking matcher over a list of VMs (each a list of volume sizes)
// and a list of physical disk capacities.
class DiskMatcher {
 public:
  DiskMatcher(const std::vector<const std::vector<std::int64_t>*>& items,
              std::vector<std::int64_t> capacities, const DiskSearchOptions& opt)
      : items_(items), remaining_(std::move(capacities)), opt_(opt) {
    const std::size_t n = items.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::vector<std::pair<std::int64_t, std::size_t>> key(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = *items[i];
      key[i] = {*std::max_element(v.begin(), v.end()), v.size()};
    }
    // Fail first: biggest volumes, then most volumes. Ties keep input order,
    // so equal VMs stay adjacent.
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return key[a] != key[b] ? key[a] > key[b] : a < b;
    });
    start_.push_back(0);
    for (std::size_t p = 0; p < n; ++p) {
      const auto& v = *items[order_[p]];
      const std::size_t s0 = size_.size();
      for (std::size_t k = 0; k < v.size(); ++k) {
        size_.push_back(v[k]);
        orig_.push_back(k);
      }
      // Volumes of one VM, descending; ties by original index.
      for (std::size_t a = s0 + 1; a < size_.size(); ++a)
        for (std::size_t b = a; b > s0 && (size_[b - 1] < size_[b] ||
                                         (size_[b - 1] == size_[b] && orig_[b - 1] > orig_[b]));
             --b) {
          std::swap(size_[b - 1], size_[b]);
          std::swap(orig_[b - 1], orig_[b]);
        }
      start_.push_back(size_.size());
    }
    for (auto x : size_) volume_left_ += x;
    for (auto c : remaining_) capacity_left_ += c;
    disk_of_.assign(size_.size(), -1);
    in_use_.assign(remaining_.size(), 0);
    cand_.assign(size_.size() * remaining_.size(), 0);
  }

  std::optional<std::vector<std::vector<int>>> solve() {
    if (!necessary_conditions()) return std::nullopt;
    build_tail_counts();
    if (!place_vm(0)) return std::nullopt;
    std::vector<std::vector<int>> out(items_.size());
    for (std::size_t p = 0; p < order_.size(); ++p) {
      auto& r = out[order_[p]];
      r.assign(start_[p + 1] - start_[p], -1);
      for (std::size_t q = start_[p]; q < start_[p + 1]; ++q) r[orig_[q]] = disk_of_[q];
    }
    return out;
  }

 private:
  bool necessary_conditions() const {
    if (volume_left_ > capacity_left_) return false;
    std::vector<std::int64_t> disks = remaining_;
    std::sort(disks.rbegin(), disks.rend());
    if (disks.empty()) return size_.empty();
    const std::int64_t dmax = disks.front();
    std::vector<std::int64_t> big;  // volumes that cannot share any disk
    for (std::size_t p = 0; p + 1 < start_.size(); ++p) {
      const std::size_t len = start_[p + 1] - start_[p];
      if (len > disks.size()) return false;
      // The volumes of one VM need distinct disks.
      for (std::size_t k = 0; k < len; ++k)
        if (size_[start_[p] + k] > disks[k]) return false;
    }
    for (auto x : size_)
      if (2 * x > dmax) big.push_back(x);
    if (big.size() > disks.size()) return false;
    std::sort(big.rbegin(), big.rend());
    for (std::size_t k = 0; k < big.size(); ++k)
      if (big[k] > disks[k]) return false;
    return true;
  }

  // Distinct volume sizes (descending) and, per suffix of VMs, how many
  // volumes of each size remain.
  void build_tail_counts() {
    distinct_ = size_;
    std::sort(distinct_.rbegin(), distinct_.rend());
    distinct_.erase(std::unique(distinct_.begin(), distinct_.end()), distinct_.end());
    const std::size_t nd = distinct_.size();
    const std::size_t np = order_.size();
    tail_counts_.assign((np + 1) * nd, 0);
    for (std::size_t p = np; p-- > 0;) {
      std::copy_n(tail_counts_.begin() + static_cast<std::ptrdiff_t>((p + 1) * nd), nd,
                  tail_counts_.begin() + static_cast<std::ptrdiff_t>(p * nd));
      for (std::size_t q = start_[p]; q < start_[p + 1]; ++q) {
        auto d = std::lower_bound(distinct_.begin(), distinct_.end(), size_[q], std::greater<>()) -
                 distinct_.begin();
        ++tail_counts_[p * nd + static_cast<std::size_t>(d)];
      }
    }
  }

  // A disk with r free holds at most floor(r / s) volumes of size >= s.
  bool counts_fit(std::size_t p) const {
    const std::size_t nd = distinct_.size();
    std::int64_t count = 0;
    for (std::size_t d = 0; d < nd; ++d) {
      count += tail_counts_[p * nd + d];
      if (count == 0) continue;
      std::int64_t slots = 0;
      for (auto r : remaining_) slots += r / distinct_[d];
      if (slots < count) return false;
    }
    return true;
  }

  std::vector<std::int64_t> state_key(std::size_t p) const {
    std::vector<std::int64_t> key;
    key.reserve(remaining_.size() + 1);
    key = remaining_;
    std::sort(key.begin(), key.end());
    key.push_back(static_cast<std::int64_t>(p));
    return key;
  }

  bool place_vm(std::size_t p) {
    if (p == order_.size()) return true;
    if (volume_left_ > capacity_left_) return false;
    if (!counts_fit(p)) return false;
    const bool memo = opt_.memo && p > 0;
    std::vector<std::int64_t> key;
    if (memo) {
      key = state_key(p);
      if (failed_.count(key)) return false;
    }
    if (place_volume(p, start_[p])) return true;
    if (memo && failed_.size() < opt_.memo_limit) failed_.insert(std::move(key));
    return false;
  }

  bool place_volume(std::size_t p, std::size_t q) {
    if (q == start_[p + 1]) {
      // This VM is complete; its disks become available to the next one.
      for (std::size_t r = start_[p]; r < q; ++r) in_use_[disk_of_[r]] = 0;
      const bool ok = place_vm(p + 1);
      for (std::size_t r = start_[p]; r < q; ++r) in_use_[disk_of_[r]] = 1;
      return ok;
    }
    const std::int64_t need = size_[q];
    const std::size_t nd = remaining_.size();
    int* cand = cand_.data() + q * nd;
    std::size_t nc = 0;
    for (std::size_t l = 0; l < nd; ++l)
      if (!in_use_[l] && remaining_[l] >= need) cand[nc++] = static_cast<int>(l);
    // Descending remaining capacity, ties by index.
    std::sort(cand, cand + nc, [&](int a, int b) {
      return remaining_[a] != remaining_[b] ? remaining_[a] > remaining_[b] : a < b;
    });
    std::int64_t last = -1;
    for (std::size_t c = 0; c < nc; ++c) {
      const int l = cand[c];
      // Disks with equal remaining capacity are interchangeable.
      if (remaining_[l] == last) continue;
      last = remaining_[l];
      remaining_[l] -= need;
      in_use_[l] = 1;
      volume_left_ -= need;
      capacity_left_ -= need;
      disk_of_[q] = l;
      if (place_volume(p, q + 1)) return true;
      remaining_[l] += need;
      in_use_[l] = 0;
      volume_left_ += need;
      capacity_left_ += need;
    }
    return false;
  }

  struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (auto x : v) h = (h ^ static_cast<std::uint64_t>(x)) * 0x100000001b3ULL;
      return static_cast<std::size_t>(h);
    }
  };

  const std::vector<const std::vector<std::int64_t>*>& items_;
  std::vector<std::int64_t> remaining_;
  DiskSearchOptions opt_;
  std::vector<std::size_t> order_;  // search position -> item
  std::vector<std::size_t> start_;  // first volume slot of each position
  std::vector<std::int64_t> size_;  // volume size per slot
  std::vector<std::size_t> orig_;   // original volume index per slot
  std::vector<int> disk_of_;        // chosen disk per slot
  std::vector<char> in_use_;        // disk used by the VM being placed
  std::vector<int> cand_;
  std::int64_t volume_left_ = 0;
  std::int64_t capacity_left_ = 0;
  std::vector<std::int64_t> distinct_;
  std::vector<std::int64_t> tail_counts_;
  std::unordered_set<std::vector<std::int64_t>, KeyHash> failed_;
};

}  // namespace detail

// Assigns every volume of every item to a disk so that one item never uses
// a disk twice and no disk overflows. Result is indexed like `items`.
// Complete: nullopt proves that no assignment exists.
inline std::optional<std::vector<std::vector<int>>> match_disks(
    const std::vector<const std::vector<std::int64_t>*>& items,
    const std::vector<std::int64_t>& capacities, const DiskSearchOptions& opt = {}) {
  detail::DiskMatcher m(items, capacities, opt);
  return m.solve();
}

// Lexicographically first disk choice (by volume order, then disk index)
// for one VM against remaining capacities.
inline std::optional<std::vector<int>> place_single_lex(const std::vector<std::int64_t>& volumes,
                                                        const std::vector<std::int64_t>& remaining) {
  std::vector<int> pick(volumes.size(), -1);
  std::vector<std::int64_t> rem = remaining;
  std::vector<bool> used(rem.size(), false);
  std::function<bool(std::size_t)> go = [&](std::size_t k) {
    if (k == volumes.size()) return true;
    for (int l = 0; l < static_cast<int>(rem.size()); ++l) {
      if (used[l] || rem[l] < volumes[k]) continue;
      used[l] = true;
      rem[l] -= volumes[k];
      pick[k] = l;
      if (go(k + 1)) return true;
      used[l] = false;
      rem[l] += volumes[k];
    }
    return false;
  };
  if (volumes.size() > remaining.size()) return std::nullopt;
  if (!go(0)) return std::nullopt;
  return pick;
}

inline bool scalar_feasible(const Catalog& catalog, const VmMultiset& mix, const PmType& pm) {
  detail::check_dimension(catalog, mix);
  std::int64_t cpu = 0, mem = 0;
  for (std::size_t u = 0; u < mix.size(); ++u) {
    cpu += mix[u] * catalog.vm_types[u].vcpus;
    mem += mix[u] * catalog.vm_types[u].memory_mib;
  }
  return cpu <= pm.vcpus && mem <= pm.memory_mib;
}

inline std::optional<DiskWitness> disk_assignment(const Catalog& catalog, const VmMultiset& mix,
                                                  const PmType& pm,
                                                  const DiskSearchOptions& opt = {}) {
  detail::check_dimension(catalog, mix);
  std::vector<const std::vector<std::int64_t>*> items;
  DiskWitness w;
  for (std::size_t u = 0; u < mix.size(); ++u)
    for (std::int64_t c = 0; c < mix[u]; ++c) {
      items.push_back(&catalog.vm_types[u].volumes);
      w.vms.push_back({static_cast<int>(u), static_cast<int>(c), {}});
    }
  auto r = match_disks(items, pm.disks, opt);
  if (!r) return std::nullopt;
  for (std::size_t i = 0; i < w.vms.size(); ++i) w.vms[i].disks = std::move((*r)[i]);
  return w;
}

inline bool config_feasible(const Catalog& catalog, const VmMultiset& w, const PmType& pm) {
  return scalar_feasible(catalog, w, pm) && disk_assignment(catalog, w, pm).has_value();
}

// Independent re-check of a witness against the mix and PM.
inline bool witness_valid(const Catalog& catalog, const VmMultiset& mix, const PmType& pm,
                          const DiskWitness& w) {
  detail::check_dimension(catalog, mix);
  VmMultiset seen(mix.size(), 0);
  std::vector<std::int64_t> load(pm.disks.size(), 0);
  for (const auto& vd : w.vms) {
    if (vd.vm_type < 0 || static_cast<std::size_t>(vd.vm_type) >= mix.size()) return false;
    ++seen[vd.vm_type];
    const auto& vols = catalog.vm_types[vd.vm_type].volumes;
    if (vd.disks.size() != vols.size()) return false;
    std::set<int> distinct;
    for (std::size_t k = 0; k < vols.size(); ++k) {
      int l = vd.disks[k];
      if (l < 0 || static_cast<std::size_t>(l) >= pm.disks.size()) return false;
      if (!distinct.insert(l).second) return false;
      load[l] += vols[k];
    }
  }
  if (seen != mix) return false;
  for (std::size_t l = 0; l < load.size(); ++l)
    if (load[l] > pm.disks[l]) return false;
  return true;
}

}  // namespace anticoloc
