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

// Run configuration shared by CLI flags and JSON config files.
//
// Config document:
//   {
//     "command": "sweep",
//     "parameters": {"quantity": "q_simple", "m_max": 30, ...},
//     "axes": [{"name": "m", "values": [1, 2, 3]},
//              {"name": "s", "range": [0.5, 4, 0.5]}],
//     "output": {"format": "csv", "path": "fig3b.csv"}
//   }
// Every key is checked; unknown keys are errors.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "divconq/battle_models.hpp"
#include "divconq/error.hpp"
#include "divconq/sweep.hpp"

namespace divconq::config {

using Json = nlohmann::ordered_json;

// I/O and structural problems with a config document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "battle-p", "winprob",      "simulate", "decide",    "equilibrium",
      "classify", "verify-prop1", "critical-s", "optimal-m", "sweep"};
  return names;
}

enum class Kind { positive, finite, probability, integer, positive_integer, seed, flag, text, members };

struct ParamRule {
  Kind kind;
  const char* domain;  // human-readable, quoted in diagnostics
};

inline const std::map<std::string, ParamRule, std::less<>>& parameter_rules() {
  static const std::map<std::string, ParamRule, std::less<>> rules = {
      {"s", {Kind::positive, "s > 0"}},
      {"s_hat", {Kind::positive, "s_hat > 0"}},
      {"m", {Kind::positive, "m > 0"}},
      {"n", {Kind::positive, "n > 0"}},
      {"m0", {Kind::positive_integer, "m0 a positive integer"}},
      {"m1", {Kind::positive_integer, "m1 a positive integer"}},
      {"R", {Kind::positive, "R > 0"}},
      {"gamma", {Kind::finite, "gamma finite"}},
      {"r", {Kind::positive, "r > 0 (e^r - 1 must be positive)"}},
      {"b", {Kind::finite, "b finite"}},
      {"c", {Kind::positive, "c > 0"}},
      {"p", {Kind::probability, "0 < p < 1"}},
      {"i", {Kind::integer, "i an integer state"}},
      {"trials", {Kind::positive_integer, "trials a positive integer"}},
      {"seed", {Kind::seed, "seed an unsigned 64-bit integer"}},
      {"partitions", {Kind::positive_integer, "partitions a positive integer"}},
      {"threads", {Kind::positive_integer, "threads a positive integer"}},
      {"m_max", {Kind::positive_integer, "m_max a positive integer"}},
      {"general", {Kind::flag, "general a boolean"}},
      {"gamma_convention", {Kind::text, "gamma_convention one of {eq10, appendix}"}},
      {"quantity", {Kind::text, "quantity a sweep quantity name"}},
      {"members", {Kind::members, "members an array of {r, b, c, s_hat}"}},
      {"s_lo", {Kind::positive, "s_lo > 0"}},
      {"s_hi", {Kind::positive, "s_hi > 0"}},
      {"tolerance", {Kind::positive, "tolerance > 0"}},
      {"r_myopic", {Kind::positive, "r_myopic > 0"}},
      {"bc_naive", {Kind::finite, "bc_naive finite"}},
      {"s_defeatist", {Kind::positive, "s_defeatist > 0"}},
      {"s_complacent", {Kind::positive, "s_complacent > 0"}},
  };
  return rules;
}

namespace detail {

inline void domain_fail(const std::string& key, const ParamRule& rule) {
  throw DomainError("parameter '" + key + "' out of domain: requires " + rule.domain);
}

inline void check_member(const Json& member, std::size_t index) {
  const std::string where = "members[" + std::to_string(index) + "]";
  if (!member.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : member.items()) {
    if (key != "r" && key != "b" && key != "c" && key != "s_hat") {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
    if (!value.is_number()) throw ConfigError(where + "." + key + " must be a number");
  }
  for (const char* key : {"r", "b", "c", "s_hat"}) {
    if (!member.contains(key)) throw ConfigError(where + " is missing '" + key + "'");
  }
  const double r = member["r"].get<double>();
  const double c = member["c"].get<double>();
  const double s_hat = member["s_hat"].get<double>();
  if (!(std::isfinite(r) && r > 0)) {
    throw DomainError(where + ".r out of domain: requires r > 0 (e^r - 1 must be positive)");
  }
  if (!(std::isfinite(c) && c > 0)) throw DomainError(where + ".c out of domain: requires c > 0");
  if (!(std::isfinite(s_hat) && s_hat > 0)) {
    throw DomainError(where + ".s_hat out of domain: requires s_hat > 0");
  }
  if (!std::isfinite(member["b"].get<double>())) {
    throw DomainError(where + ".b out of domain: requires b finite");
  }
}

}  // namespace detail

// Validates one parameter value against its key's domain. Unknown keys raise
// ConfigError, wrong types ConfigError, out-of-domain values DomainError.
inline void check_parameter(const std::string& key, const Json& value) {
  const auto it = parameter_rules().find(key);
  if (it == parameter_rules().end()) throw ConfigError("unknown key '" + key + "' in parameters");
  const ParamRule& rule = it->second;
  switch (rule.kind) {
    case Kind::flag:
      if (!value.is_boolean()) throw ConfigError("parameter '" + key + "' must be a boolean");
      return;
    case Kind::text:
      if (!value.is_string()) throw ConfigError("parameter '" + key + "' must be a string");
      if (key == "gamma_convention") parse_gamma_convention(value.get<std::string>());
      if (key == "quantity") parse_sweep_quantity(value.get<std::string>());
      return;
    case Kind::members:
      if (!value.is_array()) throw ConfigError("parameter 'members' must be an array");
      for (std::size_t k = 0; k < value.size(); ++k) detail::check_member(value[k], k);
      return;
    case Kind::seed:
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
        detail::domain_fail(key, rule);
      }
      return;
    default:
      break;
  }
  if (!value.is_number()) throw ConfigError("parameter '" + key + "' must be a number");
  const double v = value.get<double>();
  bool ok = std::isfinite(v);
  switch (rule.kind) {
    case Kind::positive: ok = ok && v > 0.0; break;
    case Kind::probability: ok = ok && v > 0.0 && v < 1.0; break;
    case Kind::integer: ok = ok && std::floor(v) == v; break;
    case Kind::positive_integer:
      ok = ok && std::floor(v) == v && v >= 1.0 && v <= std::numeric_limits<unsigned>::max();
      break;
    default: break;
  }
  if (!ok) detail::domain_fail(key, rule);
}

struct RunConfig {
  std::string command;
  Json parameters = Json::object();
  std::vector<SweepAxis> axes;
  std::optional<std::string> output_format;
  std::optional<std::string> output_path;

  std::optional<std::uint64_t> seed() const {
    if (!parameters.contains("seed")) return std::nullopt;
    return parameters["seed"].get<std::uint64_t>();
  }

  Json to_json() const {
    Json doc = Json::object();
    doc["command"] = command;
    doc["parameters"] = parameters;
    if (!axes.empty()) {
      Json arr = Json::array();
      for (const auto& axis : axes) {
        Json a = Json::object();
        a["name"] = axis.name;
        a["values"] = axis.values;
        arr.push_back(std::move(a));
      }
      doc["axes"] = std::move(arr);
    }
    if (output_format || output_path) {
      Json out = Json::object();
      if (output_format) out["format"] = *output_format;
      if (output_path) out["path"] = *output_path;
      doc["output"] = std::move(out);
    }
    return doc;
  }
};

// Inclusive arithmetic range [start, stop] with the given step.
inline std::vector<double> expand_range(double start, double stop, double step) {
  if (!(std::isfinite(start) && std::isfinite(stop) && std::isfinite(step)) || step <= 0.0 ||
      stop < start) {
    throw DomainError("axis range needs finite start <= stop and step > 0");
  }
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 10'000'000) throw DomainError("axis range too long");
  for (std::size_t k = 0; k < count; ++k) out.push_back(start + step * static_cast<double>(k));
  return out;
}

inline SweepAxis parse_axis(const Json& node, std::size_t index) {
  const std::string where = "axes[" + std::to_string(index) + "]";
  if (!node.is_object()) throw ConfigError(where + " must be an object");
  SweepAxis axis;
  bool has_values = false;
  bool has_range = false;
  for (const auto& [key, value] : node.items()) {
    if (key == "name") {
      if (!value.is_string()) throw ConfigError(where + ".name must be a string");
      axis.name = value.get<std::string>();
    } else if (key == "values") {
      if (!value.is_array()) throw ConfigError(where + ".values must be an array");
      for (const auto& v : value) {
        if (!v.is_number()) throw ConfigError(where + ".values must hold numbers");
        axis.values.push_back(v.get<double>());
      }
      has_values = true;
    } else if (key == "range") {
      if (!value.is_array() || value.size() != 3) {
        throw ConfigError(where + ".range must be [start, stop, step]");
      }
      for (const auto& v : value) {
        if (!v.is_number()) throw ConfigError(where + ".range must hold numbers");
      }
      axis.values = expand_range(value[0].get<double>(), value[1].get<double>(),
                                 value[2].get<double>());
      has_range = true;
    } else {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
  if (axis.name.empty()) throw ConfigError(where + " is missing 'name'");
  if (has_values == has_range) throw ConfigError(where + " needs exactly one of 'values' or 'range'");
  return axis;
}

namespace detail {

inline std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text, std::string_view origin = "<config>") {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string(origin) + ": parse error at " +
                      detail::line_col(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(std::string(origin) + ": top level must be an object");
  RunConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      if (!value.is_string()) throw ConfigError("'command' must be a string");
      cfg.command = value.get<std::string>();
      bool known = false;
      for (const auto& name : command_names()) known = known || name == cfg.command;
      if (!known) throw ConfigError("unknown command '" + cfg.command + "'");
    } else if (key == "parameters") {
      if (!value.is_object()) throw ConfigError("'parameters' must be an object");
      for (const auto& [pkey, pvalue] : value.items()) {
        check_parameter(pkey, pvalue);
        cfg.parameters[pkey] = pvalue;
      }
    } else if (key == "axes") {
      if (!value.is_array()) throw ConfigError("'axes' must be an array");
      for (std::size_t k = 0; k < value.size(); ++k) cfg.axes.push_back(parse_axis(value[k], k));
    } else if (key == "output") {
      if (!value.is_object()) throw ConfigError("'output' must be an object");
      for (const auto& [okey, ovalue] : value.items()) {
        if (!ovalue.is_string()) throw ConfigError("output." + okey + " must be a string");
        if (okey == "format") {
          const auto f = ovalue.get<std::string>();
          if (f != "csv" && f != "json") {
            throw DomainError("output.format must be one of {csv, json}, got '" + f + "'");
          }
          cfg.output_format = f;
        } else if (okey == "path") {
          cfg.output_path = ovalue.get<std::string>();
        } else {
          throw ConfigError("unknown key '" + okey + "' in output");
        }
      }
    } else {
      throw ConfigError("unknown key '" + key + "' at top level");
    }
  }
  if (cfg.command.empty()) throw ConfigError(std::string(origin) + ": missing 'command'");
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace divconq::config
