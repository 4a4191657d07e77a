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

// Cartesian-product parameter sweeps producing plot-ready tables.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "divconq/analysis.hpp"
#include "divconq/battle_models.hpp"
#include "divconq/error.hpp"
#include "divconq/game_theory.hpp"

namespace divconq {

enum class SweepQuantity { q_simple, q_general, incentive, optimal_m, q_loss_vs_optimal };

inline std::string_view to_string(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::q_simple: return "q_simple";
    case SweepQuantity::q_general: return "q_general";
    case SweepQuantity::incentive: return "incentive";
    case SweepQuantity::optimal_m: return "optimal_m";
    case SweepQuantity::q_loss_vs_optimal: return "q_loss_vs_optimal";
  }
  return "unknown";
}

inline SweepQuantity parse_sweep_quantity(std::string_view name) {
  for (auto q : {SweepQuantity::q_simple, SweepQuantity::q_general, SweepQuantity::incentive,
                 SweepQuantity::optimal_m, SweepQuantity::q_loss_vs_optimal}) {
    if (to_string(q) == name) return q;
  }
  throw DomainError("unknown sweep quantity '" + std::string(name) +
                    "' (expected q_simple, q_general, incentive, optimal_m, q_loss_vs_optimal)");
}

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  SweepQuantity quantity = SweepQuantity::q_simple;
  unsigned m_max = 50;  // range searched by optimal_m and q_loss_vs_optimal
};

struct SweepResult {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;
};

namespace detail {

struct AxisRule {
  bool positive;
  bool integral;
};

inline const std::map<std::string, AxisRule, std::less<>>& axis_rules() {
  static const std::map<std::string, AxisRule, std::less<>> rules = {
      {"s", {true, false}},     {"s_hat", {true, false}}, {"m", {true, true}},
      {"n", {true, true}},      {"R", {true, false}},     {"gamma", {false, false}},
      {"r", {true, false}},     {"bc", {false, false}},   {"m0", {true, true}},
      {"m1", {true, true}},
  };
  return rules;
}

struct QuantityLayout {
  std::vector<std::string> required;
  std::vector<std::string> optional;
  std::vector<std::string> outputs;
};

inline QuantityLayout layout_of(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::q_simple:
      return {{"s", "m", "n"}, {}, {"q"}};
    case SweepQuantity::q_general:
      return {{"s", "m", "n"}, {"R", "gamma"}, {"q"}};
    case SweepQuantity::incentive:
      return {{"r", "bc", "m0", "m1", "n", "s_hat"},
              {"R", "gamma"},
              {"q_m0", "q_m1", "delta_q", "incentive", "defects"}};
    case SweepQuantity::optimal_m:
      return {{"s", "n"}, {"R", "gamma"}, {"optimal_m", "q_optimal"}};
    case SweepQuantity::q_loss_vs_optimal:
      return {{"s", "s_hat", "n"},
              {"R", "gamma"},
              {"m_chosen", "m_optimal", "q_chosen", "q_optimal", "q_loss"}};
  }
  return {};
}

inline bool is_integral(double v) { return std::floor(v) == v; }

}  // namespace detail

inline void validate(const SweepSpec& spec) {
  const auto layout = detail::layout_of(spec.quantity);
  std::set<std::string, std::less<>> seen;
  for (const auto& axis : spec.axes) {
    const auto rule = detail::axis_rules().find(axis.name);
    detail::require(rule != detail::axis_rules().end(), "unknown sweep axis '" + axis.name + "'");
    const bool used =
        std::find(layout.required.begin(), layout.required.end(), axis.name) !=
            layout.required.end() ||
        std::find(layout.optional.begin(), layout.optional.end(), axis.name) !=
            layout.optional.end();
    detail::require(used, "axis '" + axis.name + "' is not used by quantity " +
                              std::string(to_string(spec.quantity)));
    detail::require(seen.insert(axis.name).second, "duplicate sweep axis '" + axis.name + "'");
    detail::require(!axis.values.empty(), "sweep axis '" + axis.name + "' is empty");
    for (double v : axis.values) {
      detail::require(std::isfinite(v), "sweep axis '" + axis.name + "' has a non-finite value");
      if (rule->second.positive) {
        detail::require(v > 0.0, "sweep axis '" + axis.name + "' values must be > 0");
      }
      const bool integral = rule->second.integral &&
                            !(spec.quantity == SweepQuantity::q_simple);
      if (integral) {
        detail::require(detail::is_integral(v),
                        "sweep axis '" + axis.name + "' values must be integers");
      }
    }
  }
  for (const auto& name : layout.required) {
    detail::require(seen.count(name) == 1, "quantity " + std::string(to_string(spec.quantity)) +
                                               " requires axis '" + name + "'");
  }
  detail::require(spec.m_max >= 1, "m_max must be >= 1");
}

namespace detail {

inline void evaluate_row(const SweepSpec& spec, const std::map<std::string, double, std::less<>>& at,
                         std::vector<double>& out) {
  auto get = [&](const char* name, double fallback) {
    const auto it = at.find(name);
    return it == at.end() ? fallback : it->second;
  };
  const double R = get("R", 1.0);
  const double gamma = get("gamma", 0.0);
  switch (spec.quantity) {
    case SweepQuantity::q_simple:
      out.push_back(q_simple(at.at("s"), at.at("m"), at.at("n")));
      break;
    case SweepQuantity::q_general:
      out.push_back(q_general(BattleModel{at.at("s"), R, gamma},
                              static_cast<unsigned>(at.at("m")),
                              static_cast<unsigned>(at.at("n"))));
      break;
    case SweepQuantity::incentive: {
      // Per-member parameters with c = 1 so b equals the b/c axis value.
      const MemberProfile member{at.at("r"), at.at("bc"), 1.0, at.at("s_hat")};
      const UnityDecision decision{static_cast<unsigned>(at.at("m0")),
                                   static_cast<unsigned>(at.at("m1"))};
      const auto n = static_cast<unsigned>(at.at("n"));
      const auto win = perceived_win(member, decision, n, R, gamma);
      const double value = incentive_from(member, win);
      out.push_back(win.q0);
      out.push_back(win.q1);
      out.push_back(win.delta());
      out.push_back(value);
      out.push_back(value < 1.0 ? 1.0 : 0.0);
      break;
    }
    case SweepQuantity::optimal_m: {
      const ModelParams params{at.at("s"), static_cast<unsigned>(at.at("n")), R, gamma};
      const unsigned best = optimal_m(params, spec.m_max);
      out.push_back(best);
      out.push_back(q_of_m(params, best));
      break;
    }
    case SweepQuantity::q_loss_vs_optimal: {
      const auto n = static_cast<unsigned>(at.at("n"));
      const ModelParams actual{at.at("s"), n, R, gamma};
      const ModelParams perceived{at.at("s_hat"), n, R, gamma};
      const unsigned chosen = optimal_m(perceived, spec.m_max);
      const unsigned best = optimal_m(actual, spec.m_max);
      const double q_chosen = q_of_m(actual, chosen);
      const double q_best = q_of_m(actual, best);
      out.push_back(chosen);
      out.push_back(best);
      out.push_back(q_chosen);
      out.push_back(q_best);
      out.push_back(q_best - q_chosen);
      break;
    }
  }
}

}  // namespace detail

// Rows run in lexicographic order of the axes as declared (first axis
// slowest). Grid points may be evaluated on several threads; row order does
// not depend on scheduling.
inline SweepResult sweep(const SweepSpec& spec, unsigned threads = 0) {
  validate(spec);
  const auto layout = detail::layout_of(spec.quantity);
  SweepResult result;
  for (const auto& axis : spec.axes) result.header.push_back(axis.name);
  for (const auto& col : layout.outputs) result.header.push_back(col);

  std::size_t total = 1;
  for (const auto& axis : spec.axes) total *= axis.values.size();
  result.rows.resize(total);

  auto fill = [&](std::size_t row) {
    std::map<std::string, double, std::less<>> at;
    std::vector<double> values(spec.axes.size());
    std::size_t rest = row;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const auto& axis = spec.axes[a];
      values[a] = axis.values[rest % axis.values.size()];
      rest /= axis.values.size();
    }
    for (std::size_t a = 0; a < spec.axes.size(); ++a) at[spec.axes[a].name] = values[a];
    if (spec.quantity == SweepQuantity::incentive) {
      detail::require(at.at("m1") < at.at("m0"), "sweep grid contains m1 >= m0");
    }
    auto& out = result.rows[row];
    out = values;
    detail::evaluate_row(spec, at, out);
    for (double v : out) {
      detail::require(std::isfinite(v), "sweep produced a non-finite value");
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    for (std::size_t row = 0; row < total; ++row) fill(row);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t row = t; row < total; row += threads) fill(row);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  if (spec.quantity == SweepQuantity::incentive) {
    const std::size_t bc_col = std::find(result.header.begin(), result.header.end(), "bc") -
                               result.header.begin();
    const std::size_t dq_col = std::find(result.header.begin(), result.header.end(), "delta_q") -
                               result.header.begin();
    std::size_t negative = 0;
    for (const auto& row : result.rows) {
      if (row[bc_col] > 0.0 && row[dq_col] < 0.0) ++negative;
    }
    if (negative > 0) {
      result.notes.push_back(
          std::to_string(negative) + " of " + std::to_string(total) +
          " rows have q(m1) < q(m0) with b/c > 0: the incentive is negative there, so every "
          "such member defects regardless of r and b/c");
    }
  }
  return result;
}

}  // namespace divconq
