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

// MPS export. Sections follow the fixed layout (NAME, ROWS, COLUMNS with
// INTORG/INTEND markers, RHS, BOUNDS, ENDATA), but fields are separated by
// whitespace because model names are longer than eight characters; every
// free-MPS reader accepts the result.
//
// Numbers are written in shortest round-trip form. Binary columns get a BV
// bound; other bounds are spelled out, so reading needs no defaults.

#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "anticoloc/mip/linear_model.hpp"

namespace anticoloc {

inline constexpr const char* kObjectiveRow = "COST";

inline std::string format_number(double x) {
  if (x == 0.0) return "0";  // also folds -0
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline void write_mps(const LinearModel& m, std::ostream& out) {
  const std::size_t n = m.vars.size();
  // Column-major copy of the rows.
  std::vector<std::size_t> start(n + 1, 0);
  for (const auto& r : m.rows)
    for (const auto& t : r.terms) ++start[static_cast<std::size_t>(t.var) + 1];
  for (std::size_t j = 0; j < n; ++j) start[j + 1] += start[j];
  std::vector<std::pair<std::size_t, double>> entries(start[n]);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < m.rows.size(); ++i)
      for (const auto& t : m.rows[i].terms) entries[fill[static_cast<std::size_t>(t.var)]++] = {i, t.coef};
  }
  const auto c = m.objective_dense();

  out << "NAME " << m.name << "\n";
  out << "ROWS\n";
  out << " N  " << kObjectiveRow << "\n";
  for (const auto& r : m.rows)
    out << " " << (r.sense == Sense::LE ? 'L' : r.sense == Sense::GE ? 'G' : 'E') << "  " << r.name << "\n";

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = m.vars[j];
    const bool integral = v.kind != VarKind::Continuous;
    if (integral != in_int) {
      out << "    MARKER" << marker++ << " 'MARKER' " << (integral ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = integral;
    }
    bool any = false;
    if (c[j] != 0.0) {
      out << "    " << v.name << " " << kObjectiveRow << " " << format_number(c[j]) << "\n";
      any = true;
    }
    for (std::size_t e = start[j]; e < start[j + 1]; ++e) {
      out << "    " << v.name << " " << m.rows[entries[e].first].name << " "
          << format_number(entries[e].second) << "\n";
      any = true;
    }
    if (!any) out << "    " << v.name << " " << kObjectiveRow << " 0\n";
  }
  if (in_int) out << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  for (const auto& r : m.rows)
    if (r.rhs != 0.0) out << "    RHS " << r.name << " " << format_number(r.rhs) << "\n";

  out << "BOUNDS\n";
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& v : m.vars) {
    if (v.kind == VarKind::Binary) {
      out << " BV BND " << v.name << "\n";
      if (v.lb != 0.0) out << " LO BND " << v.name << " " << format_number(v.lb) << "\n";
      if (v.ub != 1.0) out << " UP BND " << v.name << " " << format_number(v.ub) << "\n";
      continue;
    }
    if (v.lb == v.ub) {
      out << " FX BND " << v.name << " " << format_number(v.lb) << "\n";
      continue;
    }
    if (v.lb == -inf && v.ub == inf) {
      out << " FR BND " << v.name << "\n";
      continue;
    }
    if (v.lb == -inf)
      out << " MI BND " << v.name << "\n";
    else
      out << " LO BND " << v.name << " " << format_number(v.lb) << "\n";
    if (v.ub == inf)
      out << " PL BND " << v.name << "\n";
    else
      out << " UP BND " << v.name << " " << format_number(v.ub) << "\n";
  }
  out << "ENDATA\n";
}

inline std::string write_mps(const LinearModel& m) {
  std::ostringstream ss;
  write_mps(m, ss);
  return ss.str();
}

}  // namespace anticoloc
