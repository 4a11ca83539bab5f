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

// Reader for the MPS files produced by write_mps (whitespace separated
// fields, one objective row, no RANGES).

#pragma once

#include <charconv>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <cstdint>
#include <utility>
#include <vector>

#include "anticoloc/error.hpp"
#include "anticoloc/mip/linear_model.hpp"

namespace anticoloc {

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline double parse_number(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ParseError("bad number '" + std::string(s) + "'", line);
  return v;
}

// Open-addressing index from names to positions. Stores positions only and
// compares against the names held by the caller, which keeps memory small on
// models with millions of rows.
template <typename NameOf>
class NameIndex {
 public:
  explicit NameIndex(NameOf name_of) : name_of_(std::move(name_of)) { slots_.assign(1024, -1); }

  int find(std::string_view key) const {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t h = hash(key) & mask;; h = (h + 1) & mask) {
      const int v = slots_[h];
      if (v < 0) return -1;
      if (name_of_(v) == key) return v;
    }
  }

  // False when the name is already present.
  bool insert(std::string_view key, int value) {
    if (find(key) >= 0) return false;
    if (2 * (size_ + 1) > slots_.size()) grow();
    place(key, value);
    ++size_;
    return true;
  }

 private:
  static std::size_t hash(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }

  void place(std::string_view key, int value) {
    const std::size_t mask = slots_.size() - 1;
    std::size_t h = hash(key) & mask;
    while (slots_[h] >= 0) h = (h + 1) & mask;
    slots_[h] = value;
  }

  void grow() {
    std::vector<int> old(slots_.size() * 2, -1);
    old.swap(slots_);
    for (int v : old)
      if (v >= 0) place(name_of_(v), v);
  }

  NameOf name_of_;
  std::vector<int> slots_;
  std::size_t size_ = 0;
};

}  // namespace detail

inline LinearModel read_mps(std::istream& in) {
  enum class Section { None, Rows, Columns, Rhs, Bounds, Done };
  LinearModel m;
  Section sec = Section::None;
  std::string objective_row;
  auto row_name = [&m](int i) -> std::string_view { return m.rows[static_cast<std::size_t>(i)].name; };
  auto col_name = [&m](int j) -> std::string_view { return m.vars[static_cast<std::size_t>(j)].name; };
  detail::NameIndex<decltype(row_name)> row_index(row_name);
  detail::NameIndex<decltype(col_name)> col_index(col_name);
  bool in_int = false;
  bool saw_name = false;
  std::string line;
  std::size_t ln = 0;
  const double inf = std::numeric_limits<double>::infinity();

  auto need = [&](const std::vector<std::string_view>& f, std::size_t n) {
    if (f.size() < n) throw ParseError("expected at least " + std::to_string(n) + " fields", ln);
  };
  auto column = [&](std::string_view name) {
    const int j = col_index.find(name);
    if (j < 0) throw ParseError("unknown column '" + std::string(name) + "'", ln);
    return j;
  };
  auto row = [&](std::string_view name) {
    const int i = row_index.find(name);
    if (i < 0) throw ParseError("unknown row '" + std::string(name) + "'", ln);
    return i;
  };

  while (std::getline(in, line)) {
    ++ln;
    if (line.empty() || line[0] == '*') continue;
    auto f = detail::split_fields(line);
    if (f.empty()) continue;
    const bool header = line[0] != ' ' && line[0] != '\t';
    if (header) {
      if (f[0] == "NAME") {
        m.name = f.size() > 1 ? std::string(f[1]) : std::string();
        saw_name = true;
        sec = Section::None;
      } else if (f[0] == "ROWS") {
        sec = Section::Rows;
      } else if (f[0] == "COLUMNS") {
        sec = Section::Columns;
      } else if (f[0] == "RHS") {
        if (in_int) throw ParseError("INTORG without INTEND", ln);
        sec = Section::Rhs;
      } else if (f[0] == "BOUNDS") {
        sec = Section::Bounds;
      } else if (f[0] == "ENDATA") {
        sec = Section::Done;
        break;
      } else {
        throw ParseError("unsupported section '" + std::string(f[0]) + "'", ln);
      }
      continue;
    }
    switch (sec) {
      case Section::Rows: {
        need(f, 2);
        if (f[0] == "N") {
          if (!objective_row.empty()) throw ParseError("more than one objective row", ln);
          objective_row = std::string(f[1]);
          continue;
        }
        Sense s;
        if (f[0] == "L") s = Sense::LE;
        else if (f[0] == "G") s = Sense::GE;
        else if (f[0] == "E") s = Sense::EQ;
        else throw ParseError("bad row type '" + std::string(f[0]) + "'", ln);
        if (row_index.find(f[1]) >= 0) throw ParseError("duplicate row '" + std::string(f[1]) + "'", ln);
        m.rows.push_back({std::string(f[1]), {}, s, 0.0});
        row_index.insert(f[1], static_cast<int>(m.rows.size() - 1));
        break;
      }
      case Section::Columns: {
        need(f, 3);
        if (f[1] == "'MARKER'") {
          if (f[2] == "'INTORG'") in_int = true;
          else if (f[2] == "'INTEND'") in_int = false;
          else throw ParseError("bad marker '" + std::string(f[2]) + "'", ln);
          continue;
        }
        if (f.size() != 3 && f.size() != 5) throw ParseError("COLUMNS line needs 3 or 5 fields", ln);
        int j;
        if (!m.vars.empty() && m.vars.back().name == f[0]) {
          j = static_cast<int>(m.vars.size() - 1);
        } else {
          if (col_index.find(f[0]) >= 0)
            throw ParseError("column '" + std::string(f[0]) + "' is not contiguous", ln);
          j = static_cast<int>(m.vars.size());
          m.vars.push_back({std::string(f[0]), 0.0, inf, in_int ? VarKind::Integer : VarKind::Continuous});
          col_index.insert(f[0], j);
        }
        for (std::size_t p = 1; p + 1 < f.size(); p += 2) {
          const double v = detail::parse_number(f[p + 1], ln);
          if (f[p] == objective_row) {
            if (v != 0.0) m.objective.push_back({j, v});
            continue;
          }
          auto& terms = m.rows[static_cast<std::size_t>(row(f[p]))].terms;
          if (!terms.empty() && terms.back().var == j)
            throw ParseError("duplicate entry for column '" + std::string(f[0]) + "'", ln);
          if (v != 0.0) terms.push_back({j, v});
        }
        break;
      }
      case Section::Rhs: {
        need(f, 3);
        for (std::size_t p = 1; p + 1 < f.size(); p += 2) {
          if (f[p] == objective_row) throw ParseError("objective constant not supported", ln);
          m.rows[static_cast<std::size_t>(row(f[p]))].rhs = detail::parse_number(f[p + 1], ln);
        }
        break;
      }
      case Section::Bounds: {
        need(f, 3);
        const int j = column(f[2]);
        auto& v = m.vars[static_cast<std::size_t>(j)];
        const std::string_view t = f[0];
        auto value = [&] {
          if (f.size() < 4) throw ParseError("bound needs a value", ln);
          return detail::parse_number(f[3], ln);
        };
        if (t == "BV") {
          v.kind = VarKind::Binary;
          v.lb = 0.0;
          v.ub = 1.0;
        } else if (t == "LO") {
          v.lb = value();
        } else if (t == "UP") {
          v.ub = value();
        } else if (t == "FX") {
          v.lb = v.ub = value();
        } else if (t == "FR") {
          v.lb = -inf;
          v.ub = inf;
        } else if (t == "MI") {
          v.lb = -inf;
        } else if (t == "PL") {
          v.ub = inf;
        } else {
          throw ParseError("unsupported bound type '" + std::string(t) + "'", ln);
        }
        break;
      }
      default:
        throw ParseError("data line outside a section", ln);
    }
  }
  if (sec != Section::Done) throw ParseError("missing ENDATA", ln + 1);
  if (!saw_name) throw ParseError("missing NAME", 1);
  return m;
}

inline LinearModel read_mps(const std::string& text) {
  std::istringstream in(text);
  return read_mps(in);
}

}  // namespace anticoloc
