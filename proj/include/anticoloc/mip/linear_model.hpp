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

// Solver-neutral mixed-integer linear model: minimize c'x subject to
// linear rows and variable bounds.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "anticoloc/error.hpp"

namespace anticoloc {

enum class VarKind { Binary, Integer, Continuous };
enum class Sense { LE, GE, EQ };

inline const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::Binary: return "binary";
    case VarKind::Integer: return "integer";
    default: return "continuous";
  }
}

inline const char* to_string(Sense s) {
  switch (s) {
    case Sense::LE: return "<=";
    case Sense::GE: return ">=";
    default: return "=";
  }
}

struct Variable {
  std::string name;
  double lb = 0.0;
  double ub = 1.0;
  VarKind kind = VarKind::Binary;

  bool operator==(const Variable&) const = default;
};

struct Term {
  int var = 0;
  double coef = 0.0;

  bool operator==(const Term&) const = default;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // sorted by variable, no duplicates
  Sense sense = Sense::LE;
  double rhs = 0.0;

  bool operator==(const Constraint&) const = default;
};

struct LinearModel {
  std::string name = "model";
  std::vector<Variable> vars;
  std::vector<Constraint> rows;
  std::vector<Term> objective;  // minimized; sorted by variable

  bool operator==(const LinearModel&) const = default;

  int add_var(std::string n, double lb, double ub, VarKind kind) {
    vars.push_back({std::move(n), lb, ub, kind});
    return static_cast<int>(vars.size() - 1);
  }

  // Terms are sorted and duplicate variables merged.
  void add_row(std::string n, std::vector<Term> terms, Sense sense, double rhs) {
    normalize(terms);
    rows.push_back({std::move(n), std::move(terms), sense, rhs});
  }

  void set_objective(std::vector<Term> terms) {
    normalize(terms);
    objective = std::move(terms);
  }

  std::size_t num_nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.terms.size();
    return n;
  }

  bool has_integers() const {
    return std::any_of(vars.begin(), vars.end(),
                       [](const Variable& v) { return v.kind != VarKind::Continuous; });
  }

  std::vector<double> objective_dense() const {
    std::vector<double> c(vars.size(), 0.0);
    for (const auto& t : objective) c[static_cast<std::size_t>(t.var)] = t.coef;
    return c;
  }

  double evaluate_objective(const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& t : objective) s += t.coef * x[static_cast<std::size_t>(t.var)];
    return s;
  }

  // Largest violation of any row or bound by the point x.
  double max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      worst = std::max(worst, vars[j].lb - x[j]);
      worst = std::max(worst, x[j] - vars[j].ub);
    }
    for (const auto& r : rows) {
      double a = 0.0;
      for (const auto& t : r.terms) a += t.coef * x[static_cast<std::size_t>(t.var)];
      if (r.sense != Sense::GE) worst = std::max(worst, a - r.rhs);
      if (r.sense != Sense::LE) worst = std::max(worst, r.rhs - a);
    }
    return worst;
  }

  void validate() const {
    std::unordered_set<std::string> names;
    names.reserve(vars.size() + rows.size());
    for (const auto& v : vars) {
      if (v.name.empty()) throw InvalidInput("variable with empty name");
      if (!names.insert(v.name).second) throw InvalidInput("duplicate variable '" + v.name + "'");
      if (!(v.lb <= v.ub)) throw InvalidInput("variable '" + v.name + "' has lb > ub");
      if (v.kind == VarKind::Binary && (v.lb < 0.0 || v.ub > 1.0))
        throw InvalidInput("binary variable '" + v.name + "' has bounds outside [0,1]");
    }
    names.clear();
    auto check_terms = [&](const std::vector<Term>& ts, const std::string& where) {
      for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i].var < 0 || static_cast<std::size_t>(ts[i].var) >= vars.size())
          throw InvalidInput(where + " references an undeclared variable");
        if (i > 0 && ts[i - 1].var >= ts[i].var)
          throw InvalidInput(where + " has unsorted or duplicate terms");
      }
    };
    for (const auto& r : rows) {
      if (r.name.empty()) throw InvalidInput("row with empty name");
      if (!names.insert(r.name).second) throw InvalidInput("duplicate row '" + r.name + "'");
      check_terms(r.terms, "row '" + r.name + "'");
    }
    check_terms(objective, "objective");
  }

 private:
  static void normalize(std::vector<Term>& terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.var < b.var; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (out > 0 && terms[out - 1].var == terms[i].var) {
        terms[out - 1].coef += terms[i].coef;
      } else {
        terms[out++] = terms[i];
      }
    }
    terms.resize(out);
    terms.erase(std::remove_if(terms.begin(), terms.end(), [](const Term& t) { return t.coef == 0.0; }),
                terms.end());
  }
};

// Row counts grouped by name prefix (the text before the first '_').
inline std::map<std::string, std::int64_t> row_families(const LinearModel& m) {
  std::map<std::string, std::int64_t> out;
  for (const auto& r : m.rows) ++out[r.name.substr(0, r.name.find('_'))];
  return out;
}

inline std::map<std::string, std::int64_t> var_families(const LinearModel& m) {
  std::map<std::string, std::int64_t> out;
  for (const auto& v : m.vars) ++out[v.name.substr(0, v.name.find('_'))];
  return out;
}

}  // namespace anticoloc
