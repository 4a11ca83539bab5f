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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <numeric>

#include "support.hpp"

namespace anticoloc {
namespace {

using V = std::vector<std::int64_t>;

struct VmRow {
  const char* name;
  int vcpus;
  double gib;
  V volumes;
};

struct PmRow {
  const char* name;
  int vcpus;
  std::int64_t gib;
  V disks;
  std::int64_t cost;
};

// Every cell of the two catalog tables, memory in GiB as printed.
const std::vector<VmRow> kVmTable = {
    {"m3.medium", 1, 3.75, {4}},
    {"m3.large", 2, 7.5, {32}},
    {"m3.xlarge", 4, 15, {40, 40}},
    {"m3.2xlarge", 8, 30, {80, 80}},
    {"c3.large", 2, 3.75, {16, 16}},
    {"c3.xlarge", 4, 7.5, {40, 40}},
    {"c3.2xlarge", 8, 15, {80, 80}},
    {"c3.4xlarge", 16, 30, {160, 160}},
    {"c3.8xlarge", 32, 60, {320, 320}},
    {"r3.large", 2, 15.25, {32}},
    {"r3.xlarge", 4, 30.5, {80}},
    {"r3.2xlarge", 8, 61, {160}},
    {"r3.4xlarge", 16, 122, {320}},
    {"r3.8xlarge", 32, 244, {320, 320}},
    {"i2.xlarge", 4, 30.5, {800}},
    {"i2.2xlarge", 8, 61, V(2, 800)},
    {"i2.4xlarge", 16, 122, V(4, 800)},
    {"i2.8xlarge", 32, 244, V(8, 800)},
};

const std::vector<PmRow> kPmTable = {
    {"s1", 8, 16, V(1, 256), 100},       {"s2", 8, 32, V(1, 512), 120},
    {"s3", 8, 64, V(2, 512), 200},       {"s4", 8, 64, V(4, 512), 300},
    {"m1", 16, 32, V(2, 512), 600},      {"m2", 16, 64, V(4, 512), 700},
    {"m3", 16, 128, V(4, 1000), 900},    {"m4", 16, 256, V(8, 1000), 1500},
    {"m5", 16, 256, V(16, 512), 1800},   {"l1", 32, 256, V(4, 1000), 2500},
    {"l2", 48, 512, V(8, 1000), 3500},   {"l3", 64, 1024, V(4, 1000), 5000},
    {"l4", 80, 2048, V(16, 1600), 7000}, {"l5", 120, 4096, V(4, 1000), 9000},
    {"l6", 120, 4096, V(24, 1600), 12000},
};

TEST(Catalog, VmTypesMatchTable) {
  const auto c = builtin_catalog();
  ASSERT_EQ(c.vm_types.size(), kVmTable.size());
  for (std::size_t u = 0; u < kVmTable.size(); ++u) {
    const auto& t = c.vm_types[u];
    EXPECT_EQ(t.name, kVmTable[u].name);
    EXPECT_EQ(t.vcpus, kVmTable[u].vcpus) << t.name;
    EXPECT_EQ(t.memory_mib, static_cast<std::int64_t>(kVmTable[u].gib * 1024)) << t.name;
    EXPECT_EQ(t.volumes, kVmTable[u].volumes) << t.name;
  }
}

TEST(Catalog, PmTypesMatchTable) {
  const auto c = builtin_catalog();
  ASSERT_EQ(c.pm_types.size(), kPmTable.size());
  for (std::size_t v = 0; v < kPmTable.size(); ++v) {
    const auto& t = c.pm_types[v];
    EXPECT_EQ(t.name, kPmTable[v].name);
    EXPECT_EQ(t.vcpus, kPmTable[v].vcpus) << t.name;
    EXPECT_EQ(t.memory_mib, kPmTable[v].gib * 1024) << t.name;
    EXPECT_EQ(t.disks, kPmTable[v].disks) << t.name;
    EXPECT_EQ(t.cost, kPmTable[v].cost) << t.name;
  }
}

TEST(Catalog, Spotchecks) {
  const auto c = builtin_catalog();
  const auto& med = c.vm_types[c.vm_index("m3.medium")];
  EXPECT_EQ(med.vcpus, 1);
  EXPECT_EQ(med.memory_mib, 3840);
  EXPECT_EQ(med.volumes, V{4});
  const auto& l6 = c.pm_types[c.pm_index("l6")];
  EXPECT_EQ(l6.vcpus, 120);
  EXPECT_EQ(l6.memory_mib, 4194304);
  EXPECT_EQ(l6.disks, V(24, 1600));
  EXPECT_EQ(l6.cost, 12000);
  std::int64_t lowest = c.pm_types.front().cost;
  for (const auto& p : c.pm_types) lowest = std::min(lowest, p.cost);
  EXPECT_EQ(lowest, 100);
  EXPECT_EQ(c.pm_types[c.pm_index("s1")].cost, 100);
}

TEST(Catalog, ValidateRejectsBadTypes) {
  auto c = builtin_catalog();
  c.vm_types.push_back(c.vm_types.front());
  EXPECT_THROW(c.validate(), InvalidInput);  // duplicate name
  c = builtin_catalog();
  c.vm_types[0].volumes.clear();
  EXPECT_THROW(c.validate(), InvalidInput);
  c = builtin_catalog();
  c.pm_types[0].cost = -1;
  EXPECT_THROW(c.validate(), InvalidInput);
  c = builtin_catalog();
  c.pm_types[0].disks = {0};
  EXPECT_THROW(c.validate(), InvalidInput);
  EXPECT_THROW(builtin_catalog().vm_index("x9.huge"), InvalidInput);
}

std::int64_t total(const std::vector<std::int64_t>& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); }

TEST(Presets, CountsPerExperiment) {
  const auto one = preset_instance("I");
  EXPECT_EQ(one.num_vms(), 70);
  EXPECT_EQ(one.num_pms(), 50);
  const auto& c = one.catalog;
  EXPECT_EQ(one.vm_demand[c.vm_index("m3.medium")], 36);
  EXPECT_EQ(one.vm_demand[c.vm_index("m3.large")], 14);
  EXPECT_EQ(one.pm_fleet[c.pm_index("s3")], 10);
  EXPECT_EQ(one.pm_fleet[c.pm_index("m5")], 2);
  EXPECT_EQ(preset_instance("II").num_vms(), 77);
  EXPECT_EQ(preset_instance("II").num_pms(), 70);
  EXPECT_EQ(preset_instance("III").num_vms(), 1000);
  EXPECT_EQ(preset_instance("III").num_pms(), 1000);
  const auto five = preset_instance("V");
  EXPECT_EQ(total(five.vm_demand), 6020);
  EXPECT_EQ(total(five.pm_fleet), 2012);
  EXPECT_FALSE(five.policy.unrestricted());
  EXPECT_TRUE(preset_instance("III").policy.unrestricted());
}

TEST(Presets, UnknownIdThrows) {
  EXPECT_THROW(preset_instance("VIII"), InvalidInput);
  EXPECT_THROW(preset_instance(""), InvalidInput);
}

TEST(Presets, AllValidate) {
  for (const auto& id : preset_ids()) EXPECT_NO_THROW(preset_instance(id).validate()) << id;
}

TEST(Policy, LargePmReservation) {
  const auto p = large_pm_policy();
  const auto c = builtin_catalog();
  p.validate(c);
  const auto l2 = p.allowed.at("l2");
  EXPECT_EQ(l2.size(), 10u);
  for (const auto& name : l2) EXPECT_GE(c.vm_types[c.vm_index(name)].vcpus, 8) << name;
  EXPECT_TRUE(p.allows("s1", "m3.medium"));
  EXPECT_FALSE(p.allows("l2", "m3.medium"));
  Policy bad;
  bad.allowed["l2"] = {"x9.huge"};
  EXPECT_THROW(bad.validate(c), InvalidInput);
}

TEST(Instance, ValidateRejectsEmptyAndNegative) {
  auto t = testing::make_instance({{"m3.medium", 1}}, {{"s1", 1}});
  EXPECT_NO_THROW(t.validate());
  auto z = t;
  z.vm_demand.assign(z.vm_demand.size(), 0);
  EXPECT_THROW(z.validate(), InvalidInput);
  z = t;
  z.pm_fleet.assign(z.pm_fleet.size(), 0);
  EXPECT_THROW(z.validate(), InvalidInput);
  z = t;
  z.vm_demand[1] = -1;
  EXPECT_THROW(z.validate(), InvalidInput);
}

TEST(Instance, ExpansionIsDeterministic) {
  const auto t = preset_instance("I");
  const auto a = expand_vms(t), b = expand_vms(t);
  ASSERT_EQ(a.size(), 70u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].type, b[i].type);
    EXPECT_EQ(a[i].ordinal, b[i].ordinal);
    if (i > 0) EXPECT_TRUE(a[i - 1].type < a[i].type || a[i - 1].ordinal + 1 == a[i].ordinal);
  }
  EXPECT_EQ(label(t.catalog, a.front()), "m3.medium#0");
  EXPECT_EQ(expand_pms(t).size(), 50u);
}

TEST(Digest, SensitiveToContent) {
  auto c = builtin_catalog();
  const auto d = digest(c);
  EXPECT_EQ(d, digest(builtin_catalog()));
  c.pm_types[0].cost = 101;
  EXPECT_NE(d, digest(c));
  EXPECT_NE(digest(Policy{}), digest(large_pm_policy()));
}

// --- JSON ---

TEST(Json, MinimalInstance) {
  const auto t = load_instance(R"({"vm_demand": {"m3.medium": 1}, "pm_fleet": {"s1": 1}})");
  EXPECT_EQ(t.num_vms(), 1);
  EXPECT_EQ(t.num_pms(), 1);
  EXPECT_EQ(t.catalog, builtin_catalog());
}

TEST(Json, Errors) {
  EXPECT_THROW(load_instance(R"({"vm_demand": {"x9.huge": 1}, "pm_fleet": {"s1": 1}})"), InvalidInput);
  EXPECT_THROW(load_instance(R"({"vm_demand": {"m3.medium": -1}, "pm_fleet": {"s1": 1}})"), InvalidInput);
  EXPECT_THROW(load_instance(R"({"vm_demand": {}, "pm_fleet": {"s1": 1}})"), InvalidInput);
  EXPECT_THROW(load_instance(R"({"vm_demand": {"m3.medium": 1}, "pm_fleet": {}})"), InvalidInput);
  EXPECT_THROW(load_instance(R"({"vm_demand": {"m3.medium": 1}})"), InvalidInput);
  EXPECT_THROW(load_instance("{ not json"), ParseError);
  EXPECT_THROW(load_instance(R"({"vm_demand": {"m3.medium": 1.5}, "pm_fleet": {"s1": 1}})"), InvalidInput);
}

TEST(Json, RoundTripPresets) {
  for (const auto& id : preset_ids()) {
    const auto t = preset_instance(id);
    EXPECT_EQ(load_instance(serialize(t)), t) << id;
  }
}

TEST(Json, RoundTripCatalogAndPolicy) {
  const auto c = builtin_catalog();
  EXPECT_EQ(catalog_from_json(to_json(c)), c);
  const auto p = large_pm_policy();
  EXPECT_EQ(policy_from_json(to_json(p)), p);
}

TEST(Json, CustomCatalog) {
  const auto t = load_instance(R"({
    "catalog": {"vm_types": [{"name": "a", "vcpus": 1, "memory_mib": 10, "volumes": [5]}],
                "pm_types": [{"name": "p", "vcpus": 2, "memory_mib": 20, "disks": [10], "cost": 7}]},
    "vm_demand": {"a": 2}, "pm_fleet": {"p": 1}})");
  EXPECT_EQ(t.catalog.vm_types.size(), 1u);
  EXPECT_EQ(t.catalog.pm_types[0].cost, 7);
}

// --- configuration cache ---

TEST(Cache, StoresAndReloads) {
  const auto dir = std::filesystem::temp_directory_path() / "anticoloc-cache-test";
  std::filesystem::remove_all(dir);
  ConfigCache cache(dir.string());
  const auto c = builtin_catalog();
  const auto& s2 = c.pm_types[c.pm_index("s2")];
  EXPECT_FALSE(cache.load(s2, c, Policy{}, EnumerateOptions{}).has_value());
  const auto fresh = enumerate_cached(s2, c, Policy{}, EnumerateOptions{}, &cache);
  const auto again = cache.load(s2, c, Policy{}, EnumerateOptions{});
  ASSERT_TRUE(again.has_value());
  EXPECT_EQ(again->set, fresh.set);
  // The key only sees the policy entry of the PM type itself.
  EXPECT_TRUE(cache.load(s2, c, large_pm_policy(), EnumerateOptions{}).has_value());
  const auto& l2 = c.pm_types[c.pm_index("l2")];
  enumerate_cached(l2, c, large_pm_policy(), EnumerateOptions{}, &cache);
  EXPECT_FALSE(cache.load(l2, c, Policy{}, EnumerateOptions{}).has_value());
  EnumerateOptions capped;
  capped.demand_cap = std::vector<std::int64_t>(c.num_vm_types(), 1);
  EXPECT_FALSE(cache.load(s2, c, Policy{}, capped).has_value());
  std::filesystem::remove_all(dir);
}

TEST(Cache, DefaultDirFromEnvironment) {
  ::setenv("ANTICOLOC_CACHE", "/tmp/somewhere", 1);
  EXPECT_EQ(default_cache_dir(), "/tmp/somewhere");
  ::unsetenv("ANTICOLOC_CACHE");
  EXPECT_EQ(default_cache_dir(), ".anticoloc-cache");
}

}  // namespace
}  // namespace anticoloc
