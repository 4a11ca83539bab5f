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

// JSON reading and writing of catalogs, policies and instances.
//
//   { "catalog": {"vm_types": [{"name","vcpus","memory_mib","volumes"}],
//                 "pm_types": [{"name","vcpus","memory_mib","disks","cost"}]},
//     "vm_demand": {name: count}, "pm_fleet": {name: count},
//     "policy": {pm_type: [vm_type, ...]} }
//
// "catalog" defaults to the built-in one and "policy" to no restriction.

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "anticoloc/model.hpp"
#include "json.hpp"

namespace anticoloc {

using Json = nlohmann::json;

namespace detail {

template <typename T>
T json_get(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw InvalidInput(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidInput(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace detail

inline Json to_json(const Catalog& c) {
  Json vms = Json::array();
  for (const auto& t : c.vm_types)
    vms.push_back({{"name", t.name}, {"vcpus", t.vcpus}, {"memory_mib", t.memory_mib},
                   {"volumes", t.volumes}});
  Json pms = Json::array();
  for (const auto& t : c.pm_types)
    pms.push_back({{"name", t.name}, {"vcpus", t.vcpus}, {"memory_mib", t.memory_mib},
                   {"disks", t.disks}, {"cost", t.cost}});
  return {{"vm_types", vms}, {"pm_types", pms}};
}

inline Catalog catalog_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("catalog must be an object");
  Catalog c;
  for (const auto& e : detail::json_get<Json>(j, "vm_types", "catalog")) {
    VmType t;
    t.name = detail::json_get<std::string>(e, "name", "vm_type");
    t.vcpus = detail::json_get<int>(e, "vcpus", t.name);
    t.memory_mib = detail::json_get<std::int64_t>(e, "memory_mib", t.name);
    t.volumes = detail::json_get<std::vector<std::int64_t>>(e, "volumes", t.name);
    c.vm_types.push_back(std::move(t));
  }
  for (const auto& e : detail::json_get<Json>(j, "pm_types", "catalog")) {
    PmType t;
    t.name = detail::json_get<std::string>(e, "name", "pm_type");
    t.vcpus = detail::json_get<int>(e, "vcpus", t.name);
    t.memory_mib = detail::json_get<std::int64_t>(e, "memory_mib", t.name);
    t.disks = detail::json_get<std::vector<std::int64_t>>(e, "disks", t.name);
    t.cost = detail::json_get<std::int64_t>(e, "cost", t.name);
    c.pm_types.push_back(std::move(t));
  }
  c.validate();
  return c;
}

inline Json to_json(const Policy& p) {
  Json j = Json::object();
  for (const auto& [pm, vms] : p.allowed) j[pm] = std::vector<std::string>(vms.begin(), vms.end());
  return j;
}

inline Policy policy_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("policy must be an object");
  Policy p;
  for (const auto& [pm, vms] : j.items()) {
    if (!vms.is_array()) throw InvalidInput("policy entry '" + pm + "' must be an array");
    auto& s = p.allowed[pm];
    for (const auto& v : vms) {
      if (!v.is_string()) throw InvalidInput("policy entry '" + pm + "' must list names");
      s.insert(v.get<std::string>());
    }
  }
  return p;
}

inline Json to_json(const Instance& inst) {
  Json demand = Json::object();
  for (std::size_t u = 0; u < inst.vm_demand.size(); ++u)
    if (inst.vm_demand[u] != 0) demand[inst.catalog.vm_types[u].name] = inst.vm_demand[u];
  Json fleet = Json::object();
  for (std::size_t v = 0; v < inst.pm_fleet.size(); ++v)
    if (inst.pm_fleet[v] != 0) fleet[inst.catalog.pm_types[v].name] = inst.pm_fleet[v];
  Json j = {{"catalog", to_json(inst.catalog)}, {"vm_demand", demand}, {"pm_fleet", fleet}};
  if (!inst.policy.unrestricted()) j["policy"] = to_json(inst.policy);
  return j;
}

inline Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("instance must be a JSON object");
  Instance inst;
  inst.catalog = j.contains("catalog") ? catalog_from_json(j.at("catalog")) : builtin_catalog();
  inst.vm_demand.assign(inst.catalog.num_vm_types(), 0);
  inst.pm_fleet.assign(inst.catalog.num_pm_types(), 0);
  auto counts = [&](const char* key, auto index, std::vector<std::int64_t>& out) {
    const auto obj = detail::json_get<Json>(j, key, "instance");
    if (!obj.is_object()) throw InvalidInput(std::string(key) + " must be an object");
    for (const auto& [name, n] : obj.items()) {
      if (!n.is_number_integer()) throw InvalidInput(std::string(key) + "." + name + " must be an integer");
      out[index(name)] = n.template get<std::int64_t>();
    }
  };
  counts("vm_demand", [&](const std::string& n) { return inst.catalog.vm_index(n); }, inst.vm_demand);
  counts("pm_fleet", [&](const std::string& n) { return inst.catalog.pm_index(n); }, inst.pm_fleet);
  if (j.contains("policy")) inst.policy = policy_from_json(j.at("policy"));
  inst.validate();
  return inst;
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
}

inline Instance load_instance(const std::string& text) { return instance_from_json(parse_json(text)); }

inline std::string serialize(const Instance& inst) { return to_json(inst).dump(2) + "\n"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidInput("write to '" + path + "' failed");
}

}  // namespace anticoloc
