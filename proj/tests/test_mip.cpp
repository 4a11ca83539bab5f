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

#include <algorithm>
#include <sstream>

#include "support.hpp"

namespace anticoloc {
namespace {

using testing::make_instance;

Instance toy() { return make_instance({{"m3.medium", 1}}, {{"s1", 1}}); }

TEST(F1, OneVmOnePm) {
  const auto b = build_f1(toy());
  EXPECT_EQ(b.model.vars.size(), 3u);
  EXPECT_EQ(b.model.rows.size(), 9u);
  const std::map<std::string, std::int64_t> fam = {{"anti", 1}, {"cpu", 1}, {"dcap", 1}, {"mem", 1}, {"one", 1},
                                                   {"vd", 1},   {"yx", 1},  {"zhi", 1},  {"zlo", 1}};
  EXPECT_EQ(row_families(b.model), fam);
  for (const auto& v : b.model.vars) EXPECT_EQ(v.kind, VarKind::Binary);
  EXPECT_NO_THROW(b.model.validate());
}

TEST(F1, PolicyFixesForbiddenAssignmentsToZero) {
  auto t = make_instance({{"m3.medium", 1}}, {{"l2", 1}, {"s1", 1}});
  t.policy = large_pm_policy();
  const auto b = build_f1(t);
  const auto pms = expand_pms(t);
  for (int j = 0; j < 2; ++j) {
    const auto& v = b.model.vars[static_cast<std::size_t>(b.map.x(0, j))];
    EXPECT_EQ(v.ub, t.catalog.pm_types[pms[j].type].name == "l2" ? 0.0 : 1.0);
  }
}

TEST(F2, SinglePm) {
  const auto t = make_instance({{"m3.medium", 3}}, {{"s1", 1}});
  const auto sets = config_sets_for(t, {"s1"});
  const auto b = build_f2(t, sets);
  EXPECT_EQ(b.model.vars.size(), 11u);
  EXPECT_EQ(b.model.rows.size(), 3u + t.catalog.num_vm_types());
}

TEST(F2, TightLinkChangesOnlyTheCoefficient) {
  const auto t = make_instance({{"m3.medium", 3}}, {{"s1", 1}});
  const auto sets = config_sets_for(t, {"s1"});
  const auto loose = build_f2(t, sets);
  const auto tight = build_f2(t, sets, BuildOptions{true});
  ASSERT_EQ(loose.model.rows.size(), tight.model.rows.size());
  auto zhi = [](const LinearModel& m) {
    for (const auto& r : m.rows)
      if (r.name.rfind("zhi", 0) == 0) return r.terms.back().coef;
    return 0.0;
  };
  EXPECT_EQ(zhi(loose.model), 3.0);
  EXPECT_EQ(zhi(tight.model), 1.0);
}

TEST(Sizes, PresetIF1AndIIF1) {
  for (const auto& [id, vars, rows] : {std::tuple{"I", 17950, 26120}, std::tuple{"II", 55380, 80825}}) {
    const auto t = preset_instance(id);
    const auto est = estimate_size(t, Formulation::F1, all_direct(t), {});
    EXPECT_EQ(est.variables, vars) << id;
    EXPECT_EQ(est.constraints, rows) << id;
  }
  const auto t = preset_instance("I");
  const auto est = estimate_size(t, Formulation::F1, all_direct(t), {});
  EXPECT_EQ(est.var_families.at("y"), 90 * 160);
  EXPECT_EQ(est.var_families.at("x"), 3500);
  EXPECT_EQ(est.var_families.at("z"), 50);
}

// The closed form must agree with the builder wherever both run.
TEST(Sizes, EstimateEqualsBuildOnRandomInstances) {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto t = testing::random_small_instance(rng);
    ConfigSets sets;
    ConfigCounts counts;
    for (const auto& name : fleet_types(t)) {
      auto r = enumerate(t.catalog.pm_types[t.catalog.pm_index(name)], t.catalog, t.policy,
                         EnumerateOptions{20000, true, std::nullopt});
      counts[name] = r.cap_exceeded ? std::nullopt : std::optional<std::int64_t>(r.set.size());
      if (!r.cap_exceeded) sets[name] = r.set;
    }
    const auto part = choose_partition(t, counts, 300);
    std::vector<std::pair<Formulation, Partition>> cases = {{Formulation::F1, all_direct(t)},
                                                            {Formulation::COMB, part}};
    if (part.p1.empty()) cases.push_back({Formulation::F2, all_configured(t)});
    for (const auto& [f, p] : cases) {
      const auto b = build_model(t, f, p, sets);
      EXPECT_EQ(measure(b.model), estimate_size(t, f, p, counts)) << "trial " << trial << " " << to_string(f);
      EXPECT_NO_THROW(b.model.validate());
    }
  }
}

TEST(VarMap, DescribeIsABijection) {
  auto t = make_instance({{"m3.xlarge", 2}, {"m3.medium", 1}}, {{"s3", 1}, {"s1", 2}});
  const auto sets = config_sets_for(t, {"s1"});
  const auto part = partition_by_types(t, {"s3"});
  const auto b = build_comb(t, part, sets);
  const auto& m = b.map;
  std::vector<int> hits(static_cast<std::size_t>(m.num_vars()), 0);
  const auto vms = expand_vms(t);
  for (int i = 0; i < static_cast<int>(vms.size()); ++i)
    for (int j : part.p1) {
      ++hits[static_cast<std::size_t>(m.x(i, j))];
      EXPECT_EQ(m.describe(m.x(i, j)), (VarInfo{'x', i, -1, j, -1, -1}));
      const auto& pt = t.catalog.pm_types[m.pms[j].type];
      for (int k = 0; k < static_cast<int>(t.catalog.vm_types[vms[i].type].volumes.size()); ++k)
        for (int l = 0; l < static_cast<int>(pt.disks.size()); ++l) {
          ++hits[static_cast<std::size_t>(m.y(i, k, j, l))];
          EXPECT_EQ(m.describe(m.y(i, k, j, l)), (VarInfo{'y', i, k, j, l, -1}));
        }
    }
  for (int j : part.p2)
    for (int c = 0; c < m.num_configs(j); ++c) {
      ++hits[static_cast<std::size_t>(m.gamma(j, c))];
      EXPECT_EQ(m.describe(m.gamma(j, c)), (VarInfo{'g', -1, -1, j, -1, c}));
    }
  for (int j = 0; j < static_cast<int>(t.num_pms()); ++j) {
    ++hits[static_cast<std::size_t>(m.z(j))];
    EXPECT_EQ(m.describe(m.z(j)).family, 'z');
  }
  for (auto h : hits) EXPECT_EQ(h, 1);
  // Names carry the family as prefix.
  for (int v = 0; v < m.num_vars(); ++v) EXPECT_EQ(b.model.vars[static_cast<std::size_t>(v)].name[0], m.describe(v).family);
}

TEST(Comb, AllConfiguredIsF2UpToRowOrder) {
  const auto t = make_instance({{"m3.medium", 2}, {"m3.large", 1}}, {{"s1", 1}, {"s2", 2}});
  const auto sets = config_sets_for(t, {"s1", "s2"});
  auto f2 = build_f2(t, sets).model;
  auto comb = build_comb(t, all_configured(t), sets).model;
  EXPECT_EQ(f2.vars, comb.vars);
  EXPECT_EQ(f2.objective, comb.objective);
  auto by_name = [](std::vector<Constraint> r) {
    std::sort(r.begin(), r.end(), [](const Constraint& a, const Constraint& b) { return a.name < b.name; });
    return r;
  };
  EXPECT_EQ(by_name(f2.rows), by_name(comb.rows));
}

TEST(Comb, AllDirectMatchesF1Optimum) {
  const auto t = make_instance({{"m3.medium", 2}, {"m3.xlarge", 1}}, {{"s1", 1}, {"s3", 1}, {"s2", 1}});
  const auto f1 = build_f1(t);
  const auto comb = build_comb(t, all_direct(t), {});
  EXPECT_EQ(f1.model.vars.size(), comb.model.vars.size());
  const auto a = solve_mip(f1.model), b = solve_mip(comb.model);
  ASSERT_EQ(a.status, MipStatus::Optimal);
  ASSERT_EQ(b.status, MipStatus::Optimal);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(Partition, ChooseByThreshold) {
  const auto t = preset_instance("II");
  ConfigCounts counts;
  for (const auto& e : count_table(t.catalog, t.policy, EnumerateOptions{20000, true, std::nullopt}))
    counts[e.pm_type] = e.count;
  const auto big = choose_partition(t, counts, 100000);
  EXPECT_EQ(pm_types_of(t, big.p1), (std::set<std::string>{"l1", "l2", "l3", "l4", "l5"}));
  EXPECT_EQ(big.p1.size(), 25u);
  const auto ten = choose_partition(t, counts, 10);
  EXPECT_EQ(pm_types_of(t, ten.p2), (std::set<std::string>{"s1"}));
  const auto five = choose_partition(t, counts, 5);
  EXPECT_TRUE(five.p2.empty());
  EXPECT_THROW(choose_partition(t, counts, 0), InvalidInput);
}

TEST(Partition, ReservationPolicyMakesEverythingConfigurable) {
  const auto t = preset_instance("VI");
  ConfigCounts counts;
  for (const auto& e : count_table(t.catalog, t.policy)) counts[e.pm_type] = e.count;
  EXPECT_TRUE(choose_partition(t, counts, 100000).p1.empty());
}

TEST(Partition, Validation) {
  const auto t = make_instance({{"m3.medium", 1}}, {{"s1", 2}});
  EXPECT_THROW(check_partition(t, Partition{{0}, {}}), InvalidInput);
  EXPECT_THROW(check_partition(t, Partition{{0, 1}, {1}}), InvalidInput);
  EXPECT_THROW(check_partition(t, Partition{{1, 0}, {}}), InvalidInput);
  EXPECT_NO_THROW(check_partition(t, Partition{{1}, {0}}));
  EXPECT_THROW(build_model(t, Formulation::F1, Partition{{1}, {0}}, config_sets_for(t, {"s1"})), InvalidInput);
  EXPECT_THROW(build_model(t, Formulation::COMB, Partition{{1}, {0}}, {}), InvalidInput);
}

TEST(Formulation, Parse) {
  EXPECT_EQ(parse_formulation("F1"), Formulation::F1);
  EXPECT_EQ(parse_formulation("comb"), Formulation::COMB);
  EXPECT_THROW(parse_formulation("f3"), InvalidInput);
}

TEST(VarMap, JsonRoundTrip) {
  const auto t = make_instance({{"m3.medium", 2}}, {{"s1", 1}, {"s3", 1}});
  const auto b = build_comb(t, partition_by_types(t, {"s3"}), config_sets_for(t, {"s1"}));
  const auto loaded = varmap_from_json(to_json(b.map, t));
  EXPECT_EQ(loaded.instance, t);
  EXPECT_EQ(loaded.map.num_vars(), b.map.num_vars());
  for (int v = 0; v < b.map.num_vars(); ++v) EXPECT_EQ(loaded.map.describe(v), b.map.describe(v));
  EXPECT_THROW(varmap_from_json(Json::object()), InvalidInput);
}

// --- MPS writer ---

TEST(Mps, FormatRules) {
  const auto text = write_mps(build_f1(toy()).model);
  EXPECT_EQ(text.rfind("NAME ", 0), 0u);
  EXPECT_NE(text.find("\n G  zhi_j0_0\n"), std::string::npos);
  EXPECT_NE(text.find("\n L  zlo_j0_0\n"), std::string::npos);
  EXPECT_NE(text.find("\n E  vd_i0_0_k0\n"), std::string::npos);
  EXPECT_NE(text.find(" BV BND z_j0_0\n"), std::string::npos);
  EXPECT_NE(text.find("'MARKER' 'INTORG'"), std::string::npos);
  EXPECT_NE(text.find("'MARKER' 'INTEND'"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 7), "ENDATA\n");
}

TEST(Mps, ByteStable) {
  const auto t = preset_instance("I");
  EXPECT_EQ(write_mps(build_f1(t).model), write_mps(build_f1(t).model));
}

TEST(Mps, NumbersRoundTripExactly) {
  for (double x : {0.0, -0.0, 1.0, -3.0, 3840.0, 0.1, 1e-12, 4194304.0, 123456789.125})
    EXPECT_EQ(std::stod(format_number(x)), x);
  EXPECT_EQ(format_number(-0.0), "0");
}

}  // namespace
}  // namespace anticoloc
