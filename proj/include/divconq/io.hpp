/*
   Copyright 2026 The divconq Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Tabular output shared by the CLI: CSV (RFC 4180 quoting, LF endings) and a
// JSON document {"metadata": ..., "rows": [...]}. Reals are printed with 12
// significant digits.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace divconq::io {

using Json = nlohmann::ordered_json;

inline std::string format12(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Value of `v` after rounding to 12 significant digits.
inline double round12(double v) { return std::stod(format12(v)); }

struct Empty {};
using Cell = std::variant<Empty, double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(Empty) const { return ""; }
    std::string operator()(double v) const { return format12(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

inline Json cell_json(const Cell& cell) {
  struct Visitor {
    Json operator()(Empty) const { return nullptr; }
    Json operator()(double v) const { return round12(v); }
    Json operator()(std::int64_t v) const { return v; }
    Json operator()(std::uint64_t v) const { return v; }
    Json operator()(bool v) const { return v; }
    Json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

inline void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (k) os << ',';
    os << csv_escape(table.header[k]);
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      os << csv_escape(cell_text(row[k]));
    }
    os << '\n';
  }
}

// Numbers inside `metadata` are emitted as given; rows are rounded to 12
// significant digits.
inline void write_json(std::ostream& os, const Table& table, const Json& metadata) {
  Json doc;
  doc["metadata"] = metadata;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t k = 0; k < row.size(); ++k) obj[table.header[k]] = cell_json(row[k]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

}  // namespace divconq::io
