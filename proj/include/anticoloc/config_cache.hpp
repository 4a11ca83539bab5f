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

// On-disk cache of enumerated configuration sets. One JSON file per
// (catalog, PM type, policy, cap, zero handling); a header repeats the key
// so stale or foreign files are ignored.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "anticoloc/configs.hpp"
#include "anticoloc/io.hpp"

namespace anticoloc {

inline constexpr const char* kCacheFormat = "anticoloc-configs/1";

inline std::string default_cache_dir() {
  if (const char* env = std::getenv("ANTICOLOC_CACHE"); env && *env) return env;
  return ".anticoloc-cache";
}

class ConfigCache {
 public:
  explicit ConfigCache(std::string dir) : dir_(std::move(dir)) {}

  const std::string& dir() const { return dir_; }

  std::optional<EnumerateResult> load(const PmType& pm, const Catalog& catalog, const Policy& policy,
                                      const EnumerateOptions& opt) const {
    if (opt.demand_cap) return std::nullopt;
    const auto path = file_for(pm, catalog, policy, opt);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    try {
      Json j = parse_json(read_file(path.string()));
      if (j.value("format", "") != kCacheFormat || j.at("header") != header(pm, catalog, policy, opt))
        return std::nullopt;
      EnumerateResult r;
      r.cap_exceeded = j.at("cap_exceeded").get<bool>();
      r.set.pm_type = pm.name;
      r.set.policy_tag = digest(policy, pm.name);
      r.set.includes_zero = opt.include_zero;
      if (!r.cap_exceeded) r.set.configs = j.at("configs").get<std::vector<VmMultiset>>();
      return r;
    } catch (const std::exception&) {
      return std::nullopt;  // unreadable cache entries are recomputed
    }
  }

  void store(const PmType& pm, const Catalog& catalog, const Policy& policy,
             const EnumerateOptions& opt, const EnumerateResult& r) const {
    if (opt.demand_cap) return;
    std::filesystem::create_directories(dir_);
    Json j = {{"format", kCacheFormat},
              {"header", header(pm, catalog, policy, opt)},
              {"cap_exceeded", r.cap_exceeded},
              {"count", r.cap_exceeded ? Json(nullptr) : Json(r.set.size())},
              {"configs", r.cap_exceeded ? Json::array() : Json(r.set.configs)}};
    const auto path = file_for(pm, catalog, policy, opt);
    const auto tmp = path.string() + ".tmp";
    write_file(tmp, j.dump() + "\n");
    std::filesystem::rename(tmp, path);
  }

 private:
  static Json header(const PmType& pm, const Catalog& catalog, const Policy& policy,
                     const EnumerateOptions& opt) {
    std::vector<std::string> names;
    for (const auto& t : catalog.vm_types) names.push_back(t.name);
    return {{"catalog_digest", digest(catalog)},
            {"policy_digest", digest(policy, pm.name)},
            {"pm_type", pm.name},
            {"cap", opt.cap},
            {"include_zero", opt.include_zero},
            {"vm_types", names}};
  }

  std::filesystem::path file_for(const PmType& pm, const Catalog& catalog, const Policy& policy,
                                 const EnumerateOptions& opt) const {
    const std::string name = pm.name + "-" + digest(catalog).substr(0, 8) + "-" +
                             digest(policy, pm.name).substr(0, 8) + "-" + std::to_string(opt.cap) +
                             (opt.include_zero ? "-z" : "-nz") + ".json";
    return std::filesystem::path(dir_) / name;
  }

  std::string dir_;
};

// enumerate() with an optional cache in front.
inline EnumerateResult enumerate_cached(const PmType& pm, const Catalog& catalog,
                                        const Policy& policy, const EnumerateOptions& opt,
                                        const ConfigCache* cache) {
  if (cache) {
    if (auto hit = cache->load(pm, catalog, policy, opt)) return *hit;
  }
  auto r = enumerate(pm, catalog, policy, opt);
  if (cache) cache->store(pm, catalog, policy, opt, r);
  return r;
}

}  // namespace anticoloc
