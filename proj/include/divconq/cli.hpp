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

// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it with in-memory streams.
//
// Exit status: 0 success, 1 domain/validation/I-O error, 2 usage error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "divconq/analysis.hpp"
#include "divconq/battle_models.hpp"
#include "divconq/config.hpp"
#include "divconq/error.hpp"
#include "divconq/game_theory.hpp"
#include "divconq/io.hpp"
#include "divconq/markov_core.hpp"
#include "divconq/sweep.hpp"

namespace divconq::cli {

using Json = nlohmann::ordered_json;
using io::Cell;
using io::Table;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Defaults the CLI supplies where the library insists on explicit values.
inline constexpr unsigned kDefaultMMax = 50;
inline constexpr std::uint64_t kDefaultTrials = 100000;
inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr double kDefaultRMyopic = 1.0;
inline constexpr double kDefaultBcNaive = 0.5;
inline constexpr double kDefaultSDefeatist = 1e3;
inline constexpr double kDefaultSComplacent = 1e-3;

struct CommandKeys {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

inline const std::map<std::string, CommandKeys>& command_keys() {
  static const std::map<std::string, CommandKeys> keys = {
      {"battle-p", {{"s", "m", "n"}, {"general", "R", "gamma", "gamma_convention", "i"}}},
      {"winprob", {{"m", "n"}, {"s", "p", "general", "R", "gamma", "gamma_convention"}}},
      {"simulate",
       {{"m", "n"},
        {"s", "p", "general", "R", "gamma", "gamma_convention", "trials", "seed", "partitions"}}},
      {"decide", {{"r", "b", "c", "s_hat", "m0", "m1", "n"}, {"s", "general", "R", "gamma"}}},
      {"equilibrium", {{"members", "m0", "m1", "n", "s"}, {}}},
      {"classify",
       {{"r", "b", "c", "s_hat", "m0", "m1", "n"},
        {"r_myopic", "bc_naive", "s_defeatist", "s_complacent"}}},
      {"verify-prop1", {{"s", "n"}, {"R", "gamma", "m_max"}}},
      {"critical-s", {{"n", "s_lo", "s_hi"}, {"R", "gamma", "m_max", "tolerance"}}},
      {"optimal-m", {{"s", "n"}, {"R", "gamma", "m_max"}}},
      {"sweep", {{"quantity"}, {"m_max", "threads"}}},
  };
  return keys;
}

namespace detail {

inline std::string flag_of(const std::string& key) {
  std::string f = "--" + key;
  for (auto& ch : f) {
    if (ch == '_') ch = '-';
  }
  return f;
}

inline double parse_real(const std::string& text, const std::string& flag) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size()) {
    throw UsageError(flag + " expects a number, got '" + text + "'");
  }
  return v;
}

inline std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("--seed expects an unsigned 64-bit integer, got '" + text + "'");
  }
  return v;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

// "r:b:c:s_hat"
inline Json parse_member(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) throw UsageError("--member expects r:b:c:s_hat, got '" + text + "'");
  Json m = Json::object();
  m["r"] = parse_real(parts[0], "--member");
  m["b"] = parse_real(parts[1], "--member");
  m["c"] = parse_real(parts[2], "--member");
  m["s_hat"] = parse_real(parts[3], "--member");
  return m;
}

// "name=v1,v2,..." or "name=start:stop:step"
inline SweepAxis parse_axis_flag(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("--axis expects name=v1,v2,... or name=start:stop:step, got '" + text + "'");
  }
  SweepAxis axis;
  axis.name = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  if (rest.find(':') != std::string::npos) {
    const auto parts = split(rest, ':');
    if (parts.size() != 3) throw UsageError("--axis range must be start:stop:step");
    axis.values = config::expand_range(parse_real(parts[0], "--axis"),
                                       parse_real(parts[1], "--axis"),
                                       parse_real(parts[2], "--axis"));
  } else {
    for (const auto& part : split(rest, ',')) axis.values.push_back(parse_real(part, "--axis"));
  }
  return axis;
}

inline double real(const Json& params, const std::string& key) { return params.at(key).get<double>(); }

inline double real_or(const Json& params, const std::string& key, double fallback) {
  return params.contains(key) ? params.at(key).get<double>() : fallback;
}

inline unsigned whole(const Json& params, const std::string& key) {
  const double v = real(params, key);
  if (!(v >= 1.0 && std::floor(v) == v && v <= 1e9)) {
    throw DomainError("parameter '" + key + "' must be a positive integer here, got " +
                      io::format12(v));
  }
  return static_cast<unsigned>(v);
}

inline unsigned whole_or(const Json& params, const std::string& key, unsigned fallback) {
  return params.contains(key) ? whole(params, key) : fallback;
}

inline bool flag(const Json& params, const std::string& key) {
  return params.contains(key) && params.at(key).get<bool>();
}

inline GammaConvention convention(const Json& params) {
  return params.contains("gamma_convention")
             ? parse_gamma_convention(params.at("gamma_convention").get<std::string>())
             : GammaConvention::eq10;
}

inline BattleModel model_of(const Json& params) {
  BattleModel model{real(params, "s"), real_or(params, "R", 1.0), real_or(params, "gamma", 0.0)};
  model.validate();
  return model;
}

inline bool uses_general(const Json& params) {
  return flag(params, "general") || params.contains("R") || params.contains("gamma");
}

struct Outcome {
  Table table;
  Json extra = Json::object();
  std::vector<std::string> notes;
};

inline Cell num(double v) { return Cell{v}; }
inline Cell whole_cell(unsigned v) { return Cell{static_cast<std::int64_t>(v)}; }

// Commands ----------------------------------------------------------------

inline Outcome cmd_battle_p(const Json& params) {
  Outcome out;
  const double s = real(params, "s");
  if (!uses_general(params)) {
    if (params.contains("gamma_convention") || params.contains("i")) {
      throw UsageError("--i and --gamma-convention need --general");
    }
    const double m = real(params, "m");
    const double n = real(params, "n");
    out.table.header = {"s", "m", "n", "p"};
    out.table.rows.push_back({num(s), num(m), num(n), num(battle_p_simple(s, m, n))});
    return out;
  }
  const auto model = model_of(params);
  const unsigned m = whole(params, "m");
  const unsigned n = whole(params, "n");
  const auto conv = convention(params);
  out.table.header = {"s", "m", "n", "R", "gamma", "i", "p"};
  std::vector<int> states;
  if (params.contains("i")) {
    const double i = real(params, "i");
    if (!(i >= 1.0 && i <= static_cast<double>(m + n - 1))) {
      throw DomainError("parameter 'i' out of domain: requires 1 <= i <= m+n-1");
    }
    states.push_back(static_cast<int>(i));
  } else {
    for (int i = 1; i < static_cast<int>(m + n); ++i) states.push_back(i);
  }
  for (int i : states) {
    out.table.rows.push_back({num(s), whole_cell(m), whole_cell(n), num(model.R), num(model.gamma),
                              Cell{static_cast<std::int64_t>(i)},
                              num(battle_p_general(model, m, n, i, conv))});
  }
  return out;
}

inline void require_one_of_s_p(const Json& params) {
  if (params.contains("s") == params.contains("p")) {
    throw UsageError("exactly one of --s or --p is required");
  }
}

inline Outcome cmd_winprob(const Json& params) {
  require_one_of_s_p(params);
  Outcome out;
  if (params.contains("p")) {
    if (uses_general(params) || params.contains("gamma_convention")) {
      throw UsageError("--p (constant battle probability) cannot be combined with --general");
    }
    const double p = real(params, "p");
    const double m = real(params, "m");
    const double n = real(params, "n");
    out.table.header = {"p", "m", "n", "q"};
    out.table.rows.push_back({num(p), num(m), num(n), num(q_constant_p(p, m, n))});
    return out;
  }
  const double s = real(params, "s");
  if (!uses_general(params)) {
    if (params.contains("gamma_convention")) throw UsageError("--gamma-convention needs --general");
    const double m = real(params, "m");
    const double n = real(params, "n");
    out.table.header = {"s", "m", "n", "q"};
    out.table.rows.push_back({num(s), num(m), num(n), num(q_simple(s, m, n))});
    return out;
  }
  const auto model = model_of(params);
  const unsigned m = whole(params, "m");
  const unsigned n = whole(params, "n");
  const double q = q_general(model, m, n);
  const double q_chain = absorption_q_solve(build_chain({m, n}, model, convention(params)));
  out.table.header = {"s", "m", "n", "R", "gamma", "q", "q_chain"};
  out.table.rows.push_back({num(s), whole_cell(m), whole_cell(n), num(model.R), num(model.gamma),
                            num(q), num(q_chain)});
  return out;
}

inline Outcome cmd_simulate(const Json& params) {
  require_one_of_s_p(params);
  const unsigned m = whole(params, "m");
  const unsigned n = whole(params, "n");
  const ConflictShape shape{m, n};
  std::optional<ConflictChain> chain;
  if (params.contains("p")) {
    if (uses_general(params) || params.contains("gamma_convention")) {
      throw UsageError("--p (constant battle probability) cannot be combined with --general");
    }
    chain.emplace(build_chain(shape, real(params, "p")));
  } else {
    chain.emplace(build_chain(shape, model_of(params), convention(params)));
  }
  const std::uint64_t trials = params.contains("trials")
                                   ? static_cast<std::uint64_t>(real(params, "trials"))
                                   : kDefaultTrials;
  const std::uint64_t seed = params.contains("seed") ? params.at("seed").get<std::uint64_t>() : 0;
  const unsigned partitions = whole_or(params, "partitions", 1);
  const auto est = simulate(*chain, trials, seed, partitions);
  Outcome out;
  out.table.header = {"m", "n", "trials", "seed", "partitions", "q_hat", "std_error", "q_exact"};
  out.table.rows.push_back({whole_cell(m), whole_cell(n), Cell{est.trials}, Cell{est.seed},
                            whole_cell(est.partitions), num(est.q_hat), num(est.std_error),
                            num(absorption_q_solve(*chain))});
  out.extra["generator"] = kGeneratorName;
  out.extra["seed_split"] = "worker k seeded with the (k+1)-th splitmix64 output of seed";
  return out;
}

inline MemberProfile member_of(const Json& params) {
  MemberProfile member{real(params, "r"), real(params, "b"), real(params, "c"),
                       real(params, "s_hat")};
  member.validate();
  return member;
}

inline UnityDecision decision_of(const Json& params) {
  UnityDecision decision{whole(params, "m0"), whole(params, "m1")};
  decision.validate();
  return decision;
}

inline Outcome cmd_decide(const Json& params) {
  const auto member = member_of(params);
  const auto decision = decision_of(params);
  const unsigned n = whole(params, "n");
  const bool general = uses_general(params);
  const double R = real_or(params, "R", 1.0);
  const double gamma = real_or(params, "gamma", 0.0);
  const auto win = general ? perceived_win(member, decision, n, R, gamma)
                           : perceived_win(member, decision, n);
  const double value = incentive_from(member, win);
  const auto payoffs = expected_payoffs(member, win.q0, win.q1);
  Outcome out;
  out.table.header = {"q_m0", "q_m1", "delta_q", "incentive", "defects", "status_quo_payoff",
                      "greater_unity_payoff"};
  std::vector<Cell> row = {num(win.q0),  num(win.q1),          num(win.delta()),
                           num(value),   Cell{value < 1.0},    num(payoffs.status_quo),
                           num(payoffs.greater_unity)};
  if (params.contains("s")) {
    const double s = real(params, "s");
    ::divconq::detail::require(s > 0.0, "s must be > 0");
    const BattleModel actual{s, R, gamma};
    out.table.header.push_back("q_m0_actual");
    out.table.header.push_back("q_m1_actual");
    row.push_back(num(win_probability(actual, decision.m0, n).q));
    row.push_back(num(win_probability(actual, decision.m1, n).q));
  }
  out.table.rows.push_back(std::move(row));
  return out;
}

inline Outcome cmd_equilibrium(const Json& params) {
  CoalitionVote vote;
  vote.decision = decision_of(params);
  vote.n = whole(params, "n");
  vote.actual_s = real(params, "s");
  for (const auto& m : params.at("members")) {
    MemberProfile member{m.at("r").get<double>(), m.at("b").get<double>(), m.at("c").get<double>(),
                         m.at("s_hat").get<double>()};
    member.validate();
    vote.members.push_back(member);
  }
  const auto check = unanimous_unity_is_nash(vote);
  Outcome out;
  out.table.header = {"member",         "r",           "b",           "c",
                      "s_hat",          "q_m0_perceived", "q_m1_perceived", "q_m0_actual",
                      "q_m1_actual",    "incentive",   "defects",     "unity_is_nash"};
  for (std::size_t k = 0; k < vote.members.size(); ++k) {
    const auto& mem = vote.members[k];
    const auto& v = check.members[k];
    out.table.rows.push_back({Cell{static_cast<std::int64_t>(k)}, num(mem.r), num(mem.b),
                              num(mem.c), num(mem.s_hat), num(v.q0_perceived),
                              num(v.q1_perceived), num(v.q0_actual), num(v.q1_actual),
                              num(v.incentive), Cell{v.defects}, Cell{check.is_nash}});
  }
  out.extra["unanimous_unity_is_nash"] = check.is_nash;
  return out;
}

inline Outcome cmd_classify(const Json& params) {
  const auto member = member_of(params);
  const auto decision = decision_of(params);
  const ClassificationThresholds thresholds{
      real_or(params, "r_myopic", kDefaultRMyopic), real_or(params, "bc_naive", kDefaultBcNaive),
      real_or(params, "s_defeatist", kDefaultSDefeatist),
      real_or(params, "s_complacent", kDefaultSComplacent)};
  const auto flags = classify(member, decision, whole(params, "n"), thresholds);
  Outcome out;
  out.table.header = {"myopic", "naive", "collaborationist", "defeatist", "complacent"};
  out.table.rows.push_back({Cell{flags.myopic}, Cell{flags.naive}, Cell{flags.collaborationist},
                            Cell{flags.defeatist}, Cell{flags.complacent}});
  out.extra["thresholds"] = {{"r_myopic", thresholds.r_myopic},
                             {"bc_naive", thresholds.bc_naive},
                             {"s_defeatist", thresholds.s_defeatist},
                             {"s_complacent", thresholds.s_complacent}};
  return out;
}

inline ModelParams model_params_of(const Json& params) {
  return ModelParams{real(params, "s"), whole(params, "n"), real_or(params, "R", 1.0),
                     real_or(params, "gamma", 0.0)};
}

inline Outcome cmd_verify(const Json& params) {
  const auto mp = model_params_of(params);
  const unsigned m_max = whole_or(params, "m_max", kDefaultMMax);
  const auto report = verify_unity_optimal(mp, m_max);
  Outcome out;
  out.table.header = {"s",     "n",           "R",         "gamma",
                      "m_max", "monotone_decreasing", "violation_m", "q_violation_m",
                      "q_violation_next", "q_tail"};
  std::vector<Cell> row = {num(mp.s), whole_cell(mp.n), num(mp.R), num(mp.gamma),
                           whole_cell(m_max), Cell{report.monotone_decreasing}};
  if (report.first_violation) {
    row.push_back(whole_cell(report.first_violation->m));
    row.push_back(num(report.first_violation->q_m));
    row.push_back(num(report.first_violation->q_next));
  } else {
    row.insert(row.end(), 3, Cell{io::Empty{}});
  }
  row.push_back(num(report.q_tail));
  out.table.rows.push_back(std::move(row));
  out.extra["checked_range"] = "m = 1.." + std::to_string(m_max);
  return out;
}

inline Outcome cmd_critical(const Json& params) {
  const unsigned n = whole(params, "n");
  const double R = real_or(params, "R", 1.0);
  const double gamma = real_or(params, "gamma", 0.0);
  const unsigned m_max = whole_or(params, "m_max", kDefaultMMax);
  CriticalStrengthOptions options;
  options.tolerance = real_or(params, "tolerance", kDefaultTolerance);
  const auto result = find_critical_strength(n, R, gamma, m_max, real(params, "s_lo"),
                                             real(params, "s_hi"), options);
  Outcome out;
  out.table.header = {"n", "R", "gamma", "m_max", "tolerance", "s_star", "s_below"};
  out.table.rows.push_back({whole_cell(n), num(R), num(gamma), whole_cell(m_max),
                            num(options.tolerance), num(result.s_star), num(result.s_below)});
  return out;
}

inline Outcome cmd_optimal(const Json& params) {
  const auto mp = model_params_of(params);
  const unsigned m_max = whole_or(params, "m_max", kDefaultMMax);
  const unsigned best = optimal_m(mp, m_max);
  Outcome out;
  out.table.header = {"s", "n", "R", "gamma", "m_max", "optimal_m", "q_optimal"};
  out.table.rows.push_back({num(mp.s), whole_cell(mp.n), num(mp.R), num(mp.gamma),
                            whole_cell(m_max), whole_cell(best), num(q_of_m(mp, best))});
  return out;
}

inline Outcome cmd_sweep(const Json& params, const std::vector<SweepAxis>& axes) {
  if (axes.empty()) throw UsageError("sweep needs at least one axis (--axis or config 'axes')");
  SweepSpec spec;
  spec.axes = axes;
  spec.quantity = parse_sweep_quantity(params.at("quantity").get<std::string>());
  spec.m_max = whole_or(params, "m_max", kDefaultMMax);
  const unsigned threads = whole_or(params, "threads", 0);
  const auto result = sweep(spec, threads);
  Outcome out;
  out.table.header = result.header;
  const std::set<std::string> integer_columns = {"m_chosen", "m_optimal", "optimal_m"};
  for (const auto& row : result.rows) {
    std::vector<Cell> cells;
    cells.reserve(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (result.header[k] == "defects") {
        cells.push_back(Cell{row[k] != 0.0});
      } else if (integer_columns.count(result.header[k])) {
        cells.push_back(Cell{static_cast<std::int64_t>(row[k])});
      } else {
        cells.push_back(num(row[k]));
      }
    }
    out.table.rows.push_back(std::move(cells));
  }
  Json axes_json = Json::array();
  for (const auto& axis : axes) {
    axes_json.push_back(Json{{"name", axis.name}, {"count", axis.values.size()}});
  }
  out.extra["axes"] = std::move(axes_json);
  out.notes = result.notes;
  return out;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Divide-and-conquer conflict model: gambler's-ruin win probabilities and "
               "coalition incentives",
               "divconq"};
  app.set_version_flag("--version", std::string(kVersion));

  std::string command;
  app.add_option("command", command, "one of: battle-p winprob simulate decide equilibrium "
                                     "classify verify-prop1 critical-s optimal-m sweep");

  // Scalar flags, bound as raw text and converted after parsing.
  const std::vector<std::pair<std::string, std::string>> numeric_flags = {
      {"s", "strength of Movement 2 relative to Movement 1"},
      {"s_hat", "perceived strength"},
      {"m", "parts of Movement 1"},
      {"n", "parts of Movement 2"},
      {"m0", "status-quo part count"},
      {"m1", "greater-unity part count"},
      {"R", "randomness parameter"},
      {"gamma", "attacker/defender advantage"},
      {"r", "discount rate per period"},
      {"b", "per-period benefit of victory"},
      {"c", "up-front cost of greater unity"},
      {"p", "constant battle-win probability"},
      {"i", "interior state for battle-p"},
      {"trials", "Monte Carlo trials"},
      {"partitions", "Monte Carlo worker partitions"},
      {"threads", "sweep worker threads"},
      {"m_max", "largest m examined (default 50)"},
      {"s_lo", "lower strength bracket"},
      {"s_hi", "upper strength bracket"},
      {"tolerance", "bisection tolerance on s"},
      {"r_myopic", "myopia threshold on r"},
      {"bc_naive", "naivety threshold on b/c"},
      {"s_defeatist", "defeatism threshold on s_hat"},
      {"s_complacent", "complacency threshold on s_hat"},
  };
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& [key, help] : numeric_flags) {
    opts[key] = app.add_option(detail::flag_of(key), raw[key], help)->allow_extra_args(false);
  }
  std::string seed_text;
  auto* seed_opt = app.add_option("--seed", seed_text, "Monte Carlo seed (unsigned 64-bit)");
  std::string convention_text;
  auto* convention_opt =
      app.add_option("--gamma-convention", convention_text, "eq10 (default) or appendix");
  std::string quantity_text;
  auto* quantity_opt = app.add_option("--quantity", quantity_text, "sweep quantity");
  bool general = false;
  auto* general_opt = app.add_flag("--general", general, "use the (R, gamma) model");
  std::vector<std::string> member_texts;
  app.add_option("--member", member_texts, "voter r:b:c:s_hat (repeatable)")->take_all();
  std::vector<std::string> axis_texts;
  app.add_option("--axis", axis_texts, "sweep axis name=v1,v2 or name=start:stop:step (repeatable)")
      ->take_all();
  std::string format_text;
  auto* format_opt = app.add_option("--format", format_text, "csv (default) or json");
  std::string out_path;
  auto* out_opt = app.add_option("--out", out_path, "write output to this file");
  std::string config_path;
  auto* config_opt = app.add_option("--config", config_path, "JSON run configuration");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    config::RunConfig cfg;
    if (config_opt->count()) {
      cfg = config::load_config(config_path);
      if (!command.empty() && command != cfg.command) {
        throw UsageError("command '" + command + "' does not match config command '" +
                         cfg.command + "'");
      }
    }
    if (command.empty()) command = cfg.command;
    if (command.empty()) throw UsageError("no command given (try --help)");
    const auto keys_it = command_keys().find(command);
    if (keys_it == command_keys().end()) throw UsageError("unknown command '" + command + "'");
    cfg.command = command;

    for (const auto& [key, opt] : opts) {
      if (opt->count()) cfg.parameters[key] = detail::parse_real(raw[key], detail::flag_of(key));
    }
    if (seed_opt->count()) cfg.parameters["seed"] = detail::parse_seed(seed_text);
    if (convention_opt->count()) cfg.parameters["gamma_convention"] = convention_text;
    if (quantity_opt->count()) cfg.parameters["quantity"] = quantity_text;
    if (general_opt->count()) cfg.parameters["general"] = general;
    if (!member_texts.empty()) {
      Json members = Json::array();
      for (const auto& t : member_texts) members.push_back(detail::parse_member(t));
      cfg.parameters["members"] = std::move(members);
    }
    if (!axis_texts.empty()) {
      cfg.axes.clear();
      for (const auto& t : axis_texts) cfg.axes.push_back(detail::parse_axis_flag(t));
    }
    if (format_opt->count()) cfg.output_format = format_text;
    if (out_opt->count()) cfg.output_path = out_path;

    const auto& keys = keys_it->second;
    for (const auto& [key, value] : cfg.parameters.items()) {
      const bool allowed =
          std::find(keys.required.begin(), keys.required.end(), key) != keys.required.end() ||
          std::find(keys.optional.begin(), keys.optional.end(), key) != keys.optional.end();
      if (!allowed) {
        throw UsageError("parameter " + detail::flag_of(key) + " is not used by command '" +
                         command + "'");
      }
    }
    for (const auto& key : keys.required) {
      if (!cfg.parameters.contains(key)) {
        throw UsageError("command '" + command + "' requires " + detail::flag_of(key));
      }
    }
    if (!cfg.axes.empty() && command != "sweep") {
      throw UsageError("axes are only used by the sweep command");
    }
    for (const auto& [key, value] : cfg.parameters.items()) config::check_parameter(key, value);
    const std::string format = cfg.output_format.value_or("csv");
    if (format != "csv" && format != "json") {
      throw UsageError("--format must be csv or json, got '" + format + "'");
    }

    const Json& params = cfg.parameters;
    detail::Outcome outcome;
    if (command == "battle-p") outcome = detail::cmd_battle_p(params);
    else if (command == "winprob") outcome = detail::cmd_winprob(params);
    else if (command == "simulate") outcome = detail::cmd_simulate(params);
    else if (command == "decide") outcome = detail::cmd_decide(params);
    else if (command == "equilibrium") outcome = detail::cmd_equilibrium(params);
    else if (command == "classify") outcome = detail::cmd_classify(params);
    else if (command == "verify-prop1") outcome = detail::cmd_verify(params);
    else if (command == "critical-s") outcome = detail::cmd_critical(params);
    else if (command == "optimal-m") outcome = detail::cmd_optimal(params);
    else outcome = detail::cmd_sweep(params, cfg.axes);

    std::ofstream file;
    std::ostream* sink = &out;
    if (cfg.output_path) {
      file.open(*cfg.output_path, std::ios::binary | std::ios::trunc);
      if (!file) throw config::ConfigError("cannot open output file: " + *cfg.output_path);
      sink = &file;
    }
    if (format == "csv") {
      io::write_csv(*sink, outcome.table);
      for (const auto& note : outcome.notes) err << "note: " << note << '\n';
    } else {
      Json meta = Json::object();
      meta["command"] = command;
      meta["version"] = kVersion;
      meta["parameters"] = cfg.parameters;
      if (!cfg.axes.empty()) meta["config"] = cfg.to_json();
      meta["seed"] = params.contains("seed") ? params.at("seed") : Json(nullptr);
      meta["gamma_convention"] = std::string(to_string(detail::convention(params)));
      meta["gamma_convention_matching_closed_form"] = "appendix";
      for (const auto& [key, value] : outcome.extra.items()) meta[key] = value;
      if (!outcome.notes.empty()) meta["notes"] = outcome.notes;
      io::write_json(*sink, outcome.table, meta);
    }
    if (file.is_open()) {
      file.flush();
      if (!file) throw config::ConfigError("failed writing output file: " + *cfg.output_path);
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace divconq::cli
