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

// anticoloc: configuration enumeration, model export, in-process solves,
// the randomized heuristic and placement checks.
//
// Exit codes: 0 success (an infeasible instance is a result, not an
// error), 1 domain error, 2 usage error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anticoloc.hpp"

using namespace anticoloc;

namespace {

// --- output --------------------------------------------------------------

enum class Format { Table, Csv, Json };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  void add(std::vector<Json> r) { rows.push_back(std::move(r)); }
};

std::string cell_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isnan(d)) return "nan";
    std::ostringstream s;
    s << std::setprecision(10) << d;
    return s.str();
  }
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void print(const Table& t, Format f, std::ostream& out) {
  if (f == Format::Json) {
    Json a = Json::array();
    for (const auto& r : t.rows) {
      Json o = Json::object();
      for (std::size_t c = 0; c < t.columns.size(); ++c) {
        const Json& v = r[c];
        o[t.columns[c]] = v.is_number_float() && std::isnan(v.get<double>()) ? Json(nullptr) : v;
      }
      a.push_back(o);
    }
    out << a.dump(2) << "\n";
    return;
  }
  if (f == Format::Csv) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << csv_escape(t.columns[c]);
    out << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << csv_escape(cell_text(r[c]));
      out << "\n";
    }
    return;
  }
  std::vector<std::size_t> w(t.columns.size());
  for (std::size_t c = 0; c < w.size(); ++c) w[c] = t.columns[c].size();
  for (const auto& r : t.rows)
    for (std::size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], cell_text(r[c]).size());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << (c ? "  " : "") << cells[c];
      if (c + 1 < cells.size()) out << std::string(w[c] - cells[c].size(), ' ');
    }
    out << "\n";
  };
  line(t.columns);
  for (const auto& r : t.rows) {
    std::vector<std::string> cells;
    for (const auto& v : r) cells.push_back(cell_text(v));
    line(cells);
  }
}

void emit(const Table& t, Format f, const std::string& out_path) {
  if (out_path.empty()) {
    print(t, f, std::cout);
    return;
  }
  std::ostringstream s;
  print(t, f, s);
  write_file(out_path, s.str());
}

// --- shared options ---------------------------------------------------------

struct Common {
  std::string format = "table";
  int jobs = 1;
  std::string cache_dir = default_cache_dir();
  bool no_cache = false;

  Format fmt() const {
    if (format == "csv") return Format::Csv;
    if (format == "json") return Format::Json;
    return Format::Table;
  }
  std::optional<ConfigCache> cache() const {
    if (no_cache) return std::nullopt;
    return ConfigCache(cache_dir);
  }
};

struct InstanceArgs {
  std::string preset;
  std::string file;
  std::string policy_file;
  bool large_pm_policy = false;

  void add(CLI::App* app, bool required = true) {
    auto* g = app->add_option_group("instance", "where the instance comes from");
    g->add_option("--preset", preset, "experiment preset (I..VII)");
    g->add_option("--instance", file, "instance JSON file")->check(CLI::ExistingFile);
    if (required) g->require_option(1);
    else g->require_option(0, 1);
    app->add_option("--policy", policy_file, "policy JSON file {pm_type: [vm_type, ...]}")
        ->check(CLI::ExistingFile);
    app->add_flag("--large-pm-policy", large_pm_policy, "apply the built-in large-PM reservation policy");
  }

  bool given() const { return !preset.empty() || !file.empty(); }

  Instance load() const {
    Instance inst = !preset.empty() ? preset_instance(preset) : load_instance(read_file(file));
    if (!policy_file.empty()) inst.policy = policy_from_json(parse_json(read_file(policy_file)));
    if (large_pm_policy) inst.policy = anticoloc::large_pm_policy();
    inst.validate();
    return inst;
  }
};

struct ModelArgs {
  std::string formulation = "f1";
  std::vector<std::string> p1;
  std::int64_t threshold = kDefaultPartitionThreshold;
  std::int64_t cap = kDefaultConfigCap;
  bool demand_capped = false;
  bool tight_link = false;

  void add(CLI::App* app) {
    app->add_option("--formulation", formulation, "f1, f2 or comb")
        ->check(CLI::IsMember({"f1", "f2", "comb", "F1", "F2", "COMB"}));
    app->add_option("--p1", p1, "COMB: PM types placed directly (comma separated)")->delimiter(',');
    app->add_option("--threshold", threshold, "COMB: PM types with more configurations go to P1")
        ->check(CLI::PositiveNumber);
    app->add_option("--cap", cap, "configuration cap per PM type")->check(CLI::PositiveNumber);
    app->add_flag("--demand-capped", demand_capped, "enumerate only configurations within the demand");
    app->add_flag("--tight-link", tight_link, "use 1 instead of N in the configuration z-links");
  }

  Formulation form() const { return parse_formulation(formulation); }

  PlanOptions plan(const ConfigCache* cache) const {
    PlanOptions o;
    o.partition_threshold = threshold;
    if (!p1.empty()) o.p1_types = std::set<std::string>(p1.begin(), p1.end());
    o.demand_capped = demand_capped;
    o.cap = cap;
    o.build.tight_config_link = tight_link;
    o.cache = cache;
    return o;
  }
};

std::string partition_text(const Instance& inst, const Partition& part) {
  auto names = [&](const std::vector<int>& side) {
    std::string s;
    for (const auto& n : pm_types_of(inst, side)) s += (s.empty() ? "" : " ") + n;
    return s.empty() ? std::string("-") : s;
  };
  return "P1: " + names(part.p1) + " | P2: " + names(part.p2);
}

// Closed-form size of one (instance, formulation) pair.
SizeReport estimate(const Instance& inst, Formulation f, const PlanOptions& opt, Partition* part_out = nullptr) {
  const auto part = plan_partition(inst, f, opt);
  ConfigCounts counts;
  const auto eo = enumerate_options(inst, opt);
  for (const auto& name : pm_types_of(inst, part.p2)) {
    const auto r = enumerate_cached(inst.catalog.pm_types[inst.catalog.pm_index(name)], inst.catalog, inst.policy,
                                    eo, opt.cache);
    if (r.cap_exceeded)
      throw SizeLimitExceeded("PM type '" + name + "' exceeds the configuration cap; place it in P1");
    counts[name] = static_cast<std::int64_t>(r.set.size());
  }
  if (part_out) *part_out = part;
  return estimate_size(inst, f, part, counts);
}

Json result_json(const MipResult& r) {
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return {{"status", to_string(r.status)}, {"objective", num(r.objective)}, {"bound", num(r.bound)},
          {"gap", num(r.gap)},             {"nodes", r.nodes},              {"lp_iterations", r.lp_iterations},
          {"root_lp", num(r.root_lp)},     {"seconds", r.seconds}};
}

// Priorities for models written by `build`, recovered from the name
// prefixes: z first, y last.
std::vector<int> priority_from_names(const LinearModel& m) {
  std::vector<int> p(m.vars.size(), 1);
  for (std::size_t k = 0; k < m.vars.size(); ++k) {
    const auto& n = m.vars[k].name;
    if (n.rfind("z_", 0) == 0) p[k] = 2;
    else if (n.rfind("y_", 0) == 0) p[k] = 0;
  }
  return p;
}

Placement load_placement(const std::string& path, const std::string& instance_file, Instance& inst) {
  const Json j = parse_json(read_file(path));
  if (!instance_file.empty()) {
    inst = load_instance(read_file(instance_file));
  } else if (j.contains("instance")) {
    inst = instance_from_json(j.at("instance"));
  } else {
    throw InvalidInput("placement has no embedded instance; pass --instance");
  }
  return placement_from_json(j, inst);
}

// --- experiments -------------------------------------------------------------

struct SizeRow {
  const char* preset;
  Formulation f;
  std::optional<std::set<std::string>> p1;
  std::optional<std::int64_t> vars, rows;  // published, when known
};

Table experiment_sizes(const ConfigCache* cache) {
  const std::set<std::string> ltypes = {"l1", "l2", "l3", "l4", "l5", "l6"};
  const std::vector<SizeRow> rows = {
      {"I", Formulation::F1, std::nullopt, 17950, 26120},
      {"I", Formulation::F2, std::nullopt, 51597, 168},
      {"II", Formulation::F1, std::nullopt, 55380, 80825},
      {"II", Formulation::COMB, ltypes, 97610, 37538},
      {"III", Formulation::F1, std::nullopt, std::nullopt, std::nullopt},
      {"III", Formulation::F2, std::nullopt, 1099900, 3018},
      {"IV", Formulation::COMB, ltypes, std::nullopt, std::nullopt},
      {"V", Formulation::F2, std::nullopt, std::nullopt, std::nullopt},
      {"VI", Formulation::F2, std::nullopt, std::nullopt, std::nullopt},
      {"VII", Formulation::F2, std::nullopt, std::nullopt, std::nullopt},
  };
  Table t{{"experiment", "formulation", "partition", "variables", "constraints", "published_variables",
           "published_constraints", "match"},
          {}};
  for (const auto& r : rows) {
    const auto inst = preset_instance(r.preset);
    PlanOptions o;
    o.p1_types = r.p1;
    o.cache = cache;
    Partition part;
    const auto s = estimate(inst, r.f, o, &part);
    auto opt_num = [](const std::optional<std::int64_t>& v) { return v ? Json(*v) : Json(nullptr); };
    const Json match = r.vars ? Json(s.variables == *r.vars && s.constraints == *r.rows ? "yes" : "no") : Json("-");
    t.add({r.preset, to_string(r.f), partition_text(inst, part), s.variables, s.constraints, opt_num(r.vars),
           opt_num(r.rows), match});
  }
  return t;
}

Table experiment_heuristic(std::uint64_t seed, std::int64_t runs, int jobs) {
  Table t{{"experiment", "runs", "seed", "mean", "min", "max", "stddev", "infeasible"}, {}};
  for (const char* id : {"I", "II", "III"}) {
    const auto s = run_batch(preset_instance(id), {seed, runs}, jobs);
    t.add({id, runs, seed, s.mean, s.min, s.max, s.stddev, s.infeasible});
  }
  return t;
}

Table experiment_solve_i(double time_limit, const ConfigCache* cache) {
  const auto inst = preset_instance("I");
  PlanOptions o;
  o.cache = cache;
  o.build.tight_config_link = true;
  MipParams mp;
  mp.time_limit = time_limit;
  const auto out = solve_instance(inst, Formulation::F2, o, mp);
  const auto s = measure(out.built.model);
  const auto h = run_batch(inst, {1, 50});
  Table t{{"experiment", "formulation", "variables", "constraints", "status", "objective", "used_pms", "nodes",
           "seconds", "valid", "heuristic_mean", "heuristic_min"},
          {}};
  t.add({"I", "f2", s.variables, s.constraints, to_string(out.mip.status),
         out.mip.has_incumbent() ? Json(out.mip.objective) : Json(nullptr),
         out.placement ? Json(out.placement->used_pms().size()) : Json(nullptr), out.mip.nodes, out.mip.seconds,
         out.placement ? Json(validate(*out.placement, inst).valid()) : Json(nullptr), h.mean, h.min});
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anticoloc: VM placement with disk anti-colocation", "anticoloc"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--format", common.format, "table, csv or json")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--jobs", common.jobs, "worker threads for independent units")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--cache-dir", common.cache_dir, "configuration cache (env ANTICOLOC_CACHE)");
  app.add_flag("--no-cache", common.no_cache, "do not read or write the configuration cache");
  app.fallthrough();

  // enumerate
  auto* en = app.add_subcommand("enumerate", "count (and optionally write) feasible configurations");
  std::vector<std::string> en_types;
  bool en_all = false;
  std::string en_out;
  InstanceArgs en_inst;
  std::int64_t en_cap = kDefaultConfigCap;
  en->add_option("--pm-type", en_types, "PM type(s) to enumerate")->delimiter(',');
  en->add_flag("--all", en_all, "every PM type of the catalog");
  en->add_option("--cap", en_cap, "configuration cap per PM type")->check(CLI::PositiveNumber);
  en->add_option("--out", en_out, "write the configuration vectors as JSON");
  en_inst.add(en, false);

  // estimate / build
  auto* es = app.add_subcommand("estimate", "closed-form model size");
  InstanceArgs es_inst;
  ModelArgs es_model;
  es_inst.add(es);
  es_model.add(es);

  auto* bu = app.add_subcommand("build", "build a model and write it as MPS");
  InstanceArgs bu_inst;
  ModelArgs bu_model;
  std::string bu_out, bu_varmap;
  bu_inst.add(bu);
  bu_model.add(bu);
  bu->add_option("--out", bu_out, "MPS output file")->required();
  bu->add_option("--varmap", bu_varmap, "variable map JSON (for decoding external solutions)");

  // solve
  auto* so = app.add_subcommand("solve", "solve an MPS file or an instance in process");
  InstanceArgs so_inst;
  ModelArgs so_model;
  std::string so_mps, so_placement, so_solution;
  double so_time = std::numeric_limits<double>::infinity(), so_gap = 0.0;
  std::int64_t so_nodes = 0;
  so_inst.add(so, false);
  so_model.add(so);
  so->add_option("--model", so_mps, "MPS file to solve")->check(CLI::ExistingFile);
  so->add_option("--time-limit", so_time, "seconds")->check(CLI::NonNegativeNumber);
  so->add_option("--gap", so_gap, "relative gap at which to stop")->check(CLI::NonNegativeNumber);
  so->add_option("--node-limit", so_nodes, "branch-and-bound nodes (0: unlimited)")->check(CLI::NonNegativeNumber);
  so->add_option("--placement-out", so_placement, "write the decoded placement as JSON");
  so->add_option("--solution-out", so_solution, "write nonzero variable values as JSON");

  // heuristic
  auto* he = app.add_subcommand("heuristic", "randomized first-fit runs");
  InstanceArgs he_inst;
  std::int64_t he_runs = 1;
  std::uint64_t he_seed = 0;
  std::string he_csv, he_placement;
  he_inst.add(he);
  he->add_option("--runs", he_runs, "number of runs")->check(CLI::PositiveNumber);
  he->add_option("--seed", he_seed, "seed of run 0 (run r uses seed + r)")->required();
  he->add_option("--csv", he_csv, "per-run CSV (run, seed, status, cost, used_pms)");
  he->add_option("--placement-out", he_placement, "placement of the cheapest run as JSON");

  // validate
  auto* va = app.add_subcommand("validate", "check a placement, or decode and check an external solution");
  std::string va_instance, va_placement, va_varmap, va_solution, va_out;
  va->add_option("--instance", va_instance, "instance JSON (default: embedded in the placement)")
      ->check(CLI::ExistingFile);
  va->add_option("--placement", va_placement, "placement JSON")->check(CLI::ExistingFile);
  va->add_option("--varmap", va_varmap, "variable map JSON written by build")->check(CLI::ExistingFile);
  va->add_option("--solution", va_solution, "solution JSON {variable: value}")->check(CLI::ExistingFile);
  va->add_option("--placement-out", va_out, "write the decoded placement as JSON");

  // report
  auto* re = app.add_subcommand("report", "utilization of a placement");
  std::string re_instance, re_placement;
  bool re_by_type = false;
  re->add_option("--placement", re_placement, "placement JSON")->required()->check(CLI::ExistingFile);
  re->add_option("--instance", re_instance, "instance JSON (default: embedded in the placement)")
      ->check(CLI::ExistingFile);
  re->add_flag("--by-type", re_by_type, "aggregate per PM type");

  // experiment
  auto* ex = app.add_subcommand("experiment", "batch drivers: sizes, heuristic, solve-i");
  std::string ex_id, ex_out;
  std::int64_t ex_runs = 50;
  std::uint64_t ex_seed = 1;
  double ex_time = 600;
  ex->add_option("--id", ex_id, "sizes, heuristic or solve-i")
      ->required()
      ->check(CLI::IsMember({"sizes", "heuristic", "solve-i"}));
  ex->add_option("--out", ex_out, "output file (default: stdout)");
  ex->add_option("--runs", ex_runs, "heuristic runs per experiment")->check(CLI::PositiveNumber);
  ex->add_option("--seed", ex_seed, "heuristic seed");
  ex->add_option("--time-limit", ex_time, "solve-i time limit in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return 2;
  }

  const auto cache_holder = common.cache();
  const ConfigCache* cache = cache_holder ? &*cache_holder : nullptr;
  const Format fmt = common.fmt();

  try {
    if (*en) {
      Instance inst = en_inst.given() ? en_inst.load() : Instance{builtin_catalog(), {}, {}, {}};
      if (!en_inst.given()) {
        if (!en_inst.policy_file.empty())
          inst.policy = policy_from_json(parse_json(read_file(en_inst.policy_file)));
        if (en_inst.large_pm_policy) inst.policy = anticoloc::large_pm_policy();
        inst.policy.validate(inst.catalog);
      }
      std::vector<std::string> types = en_types;
      if (en_all || types.empty()) {
        if (!en_all && en_inst.given()) {
          for (const auto& n : fleet_types(inst)) types.push_back(n);
        } else {
          types.clear();
          for (const auto& pt : inst.catalog.pm_types) types.push_back(pt.name);
        }
      }
      EnumerateOptions eo;
      eo.cap = en_cap;
      Table t{{"pm_type", "configurations", "seconds"}, {}};
      Json dump = Json::object();
      for (const auto& name : types) {
        const auto& pm = inst.catalog.pm_types[inst.catalog.pm_index(name)];
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = enumerate_cached(pm, inst.catalog, inst.policy, eo, cache);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        t.add({name, r.cap_exceeded ? Json("cap exceeded") : Json(r.set.size()), secs});
        if (!en_out.empty() && !r.cap_exceeded)
          dump[name] = {{"policy_tag", r.set.policy_tag}, {"includes_zero", r.set.includes_zero},
                        {"configs", r.set.configs}};
      }
      if (!en_out.empty()) {
        Json vm_order = Json::array();
        for (const auto& vt : inst.catalog.vm_types) vm_order.push_back(vt.name);
        write_file(en_out, Json{{"vm_types", vm_order}, {"config_sets", dump}}.dump() + "\n");
      }
      print(t, fmt, std::cout);
    } else if (*es) {
      const auto inst = es_inst.load();
      const auto opt = es_model.plan(cache);
      Partition part;
      const auto s = estimate(inst, es_model.form(), opt, &part);
      Table t{{"formulation", "partition", "variables", "constraints"}, {}};
      t.add({to_string(es_model.form()), partition_text(inst, part), s.variables, s.constraints});
      print(t, fmt, std::cout);
      Table fam{{"family", "count"}, {}};
      for (const auto& [k, v] : s.var_families) fam.add({"var " + k, v});
      for (const auto& [k, v] : s.row_families) fam.add({"row " + k, v});
      if (fmt == Format::Table) {
        std::cout << "\n";
        print(fam, fmt, std::cout);
      }
    } else if (*bu) {
      const auto inst = bu_inst.load();
      const auto built = build_planned(inst, bu_model.form(), bu_model.plan(cache));
      {
        std::ofstream out(bu_out, std::ios::binary);
        if (!out) throw InvalidInput("cannot write '" + bu_out + "'");
        write_mps(built.model, out);
        if (!out) throw InvalidInput("write to '" + bu_out + "' failed");
      }
      if (!bu_varmap.empty()) write_file(bu_varmap, to_json(built.map, inst).dump() + "\n");
      const auto s = measure(built.model);
      Table t{{"formulation", "partition", "variables", "constraints", "mps"}, {}};
      t.add({to_string(bu_model.form()), partition_text(inst, built.map.partition), s.variables, s.constraints,
             bu_out});
      print(t, fmt, std::cout);
    } else if (*so) {
      if (so_mps.empty() == !so_inst.given())
        throw CLI::ValidationError("solve", "give exactly one of --model or --preset/--instance");
      MipParams mp;
      mp.time_limit = so_time;
      mp.gap_tolerance = so_gap;
      mp.node_limit = so_nodes;
      Json out;
      const LinearModel* model = nullptr;
      LinearModel loaded;
      std::optional<SolveOutcome> outcome;
      std::optional<Instance> inst;
      if (!so_mps.empty()) {
        std::ifstream in(so_mps, std::ios::binary);
        loaded = read_mps(in);
        model = &loaded;
        mp.priority = priority_from_names(loaded);
        const auto r = solve_mip(loaded, mp);
        out = result_json(r);
        outcome = SolveOutcome{{}, r, std::nullopt};
      } else {
        inst = so_inst.load();
        outcome = solve_instance(*inst, so_model.form(), so_model.plan(cache), mp);
        model = &outcome->built.model;
        out = result_json(outcome->mip);
        out["formulation"] = to_string(so_model.form());
        if (outcome->placement) {
          const auto rep = validate(*outcome->placement, *inst);
          out["used_pms"] = outcome->placement->used_pms().size();
          out["valid"] = rep.valid();
          if (!so_placement.empty()) write_file(so_placement, to_json(*outcome->placement, *inst).dump(2) + "\n");
        }
      }
      if (!so_solution.empty() && outcome->mip.has_incumbent()) {
        Json sol = Json::object();
        for (std::size_t k = 0; k < model->vars.size(); ++k)
          if (std::abs(outcome->mip.x[k]) > 1e-9) sol[model->vars[k].name] = outcome->mip.x[k];
        write_file(so_solution, sol.dump(2) + "\n");
      }
      if (fmt == Format::Json) {
        std::cout << out.dump(2) << "\n";
      } else {
        Table t{{}, {{}}};
        for (const auto& [k, v] : out.items()) {
          t.columns.push_back(k);
          t.rows[0].push_back(v);
        }
        print(t, fmt, std::cout);
      }
    } else if (*he) {
      const auto inst = he_inst.load();
      const auto stats = run_batch(inst, {he_seed, he_runs}, common.jobs);
      if (!he_csv.empty()) {
        Table runs{{"run", "seed", "status", "cost", "used_pms"}, {}};
        for (const auto& r : stats.runs)
          runs.add({r.run, r.seed, r.feasible ? "feasible" : "infeasible", r.feasible ? Json(r.cost) : Json(nullptr),
                    r.feasible ? Json(r.used_pms) : Json(nullptr)});
        emit(runs, Format::Csv, he_csv);
      }
      if (!he_placement.empty()) {
        const RunRecord* best = nullptr;
        for (const auto& r : stats.runs)
          if (r.feasible && (!best || r.cost < best->cost)) best = &r;
        if (!best) throw InvalidInput("no feasible run; nothing to write");
        const auto h = place_randomized(inst, best->seed);
        write_file(he_placement, to_json(h.placement, inst).dump(2) + "\n");
      }
      Table t{{"runs", "feasible", "infeasible", "mean", "min", "max", "stddev"}, {}};
      t.add({he_runs, he_runs - stats.infeasible, stats.infeasible, stats.mean, stats.min, stats.max, stats.stddev});
      print(t, fmt, std::cout);
    } else if (*va) {
      Instance inst;
      Placement p;
      if (!va_solution.empty()) {
        if (va_varmap.empty()) throw CLI::ValidationError("validate", "--solution needs --varmap");
        const auto lv = varmap_from_json(parse_json(read_file(va_varmap)));
        inst = lv.instance;
        const auto built = build_model(inst, lv.map.formulation, lv.map.partition, lv.map.configs, lv.map.options);
        const auto named = parse_json(read_file(va_solution)).get<std::map<std::string, double>>();
        p = decode(built.map, inst, values_from_names(built.model, named));
        if (!va_out.empty()) write_file(va_out, to_json(p, inst).dump(2) + "\n");
      } else if (!va_placement.empty()) {
        p = load_placement(va_placement, va_instance, inst);
      } else {
        throw CLI::ValidationError("validate", "give --placement, or --varmap with --solution");
      }
      const auto rep = validate(p, inst);
      Table t{{"valid", "cost", "used_pms", "violations"}, {}};
      std::string v;
      for (const auto& m : rep.violations) v += (v.empty() ? "" : "; ") + m;
      t.add({rep.valid() ? "yes" : "no", cost(p, inst), p.used_pms().size(), v});
      print(t, fmt, std::cout);
      if (!rep.valid()) return 1;
    } else if (*re) {
      Instance inst;
      const auto p = load_placement(re_placement, re_instance, inst);
      const auto u = utilization(p, inst);
      Table t;
      if (re_by_type) {
        t.columns = {"pm_type", "used", "vcpu", "memory", "disk_count", "disk_capacity"};
        for (const auto& r : u.types) t.add({r.type, r.used, r.vcpu, r.memory, r.disk_count, r.disk_capacity});
      } else {
        t.columns = {"pm", "pm_type", "vcpu", "memory", "disk_count", "disk_capacity"};
        for (const auto& r : u.pms) t.add({r.label, r.type, r.vcpu, r.memory, r.disk_count, r.disk_capacity});
      }
      print(t, fmt, std::cout);
    } else if (*ex) {
      Table t;
      if (ex_id == "sizes") t = experiment_sizes(cache);
      else if (ex_id == "heuristic") t = experiment_heuristic(ex_seed, ex_runs, common.jobs);
      else t = experiment_solve_i(ex_time, cache);
      emit(t, fmt, ex_out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "anticoloc: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "anticoloc: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "anticoloc: malformed JSON: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "anticoloc: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
