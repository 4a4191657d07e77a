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

// Per-battle win probability models and the closed-form overall win
// probabilities of the generalized gambler's ruin.
//
// Conventions: Movement 1 has m parts and total strength F, Movement 2 has n
// parts and strength sF. The conflict starts at state n; Movement 1 wins when
// the walk reaches state 0 and loses at state m+n.

#include <cmath>
#include <string>
#include <string_view>

#include "divconq/error.hpp"

namespace divconq {

// Numerically stable logistic function.
inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double logit(double p) {
  detail::require(p > 0.0 && p < 1.0, "logit: p must lie in (0, 1)");
  return std::log(p) - std::log1p(-p);
}

// Which side of the starting state receives +gamma.
//  eq10:     p_i = sigmoid(logit(p) + sgn(i - n) * gamma)
//  appendix: p_i = sigmoid(logit(p) - sgn(i - n) * gamma), i.e. p+ on the
//            states between the start and Movement 1's victory.
enum class GammaConvention { eq10, appendix };

inline std::string_view to_string(GammaConvention c) {
  return c == GammaConvention::eq10 ? "eq10" : "appendix";
}

inline GammaConvention parse_gamma_convention(std::string_view name) {
  if (name == "eq10") return GammaConvention::eq10;
  if (name == "appendix") return GammaConvention::appendix;
  throw DomainError("gamma-convention must be one of {eq10, appendix}, got '" +
                    std::string(name) + "'");
}

// Strength ratio s, randomness R and attacker/defender advantage gamma.
struct BattleModel {
  double s = 1.0;
  double R = 1.0;
  double gamma = 0.0;

  void validate() const {
    detail::require(std::isfinite(s) && s > 0.0, "s must be > 0");
    detail::require(std::isfinite(R) && R > 0.0, "R must be > 0");
    detail::require(std::isfinite(gamma), "gamma must be finite");
  }

  bool is_simple() const { return R == 1.0 && gamma == 0.0; }
};

enum class WinMethod {
  closed_form_constant_p,
  closed_form_simple,
  closed_form_general,
  linear_solve,
};

inline std::string_view to_string(WinMethod m) {
  switch (m) {
    case WinMethod::closed_form_constant_p: return "closed_form_constant_p";
    case WinMethod::closed_form_simple: return "closed_form_simple";
    case WinMethod::closed_form_general: return "closed_form_general";
    case WinMethod::linear_solve: return "linear_solve";
  }
  return "unknown";
}

struct WinProbabilityResult {
  double q = 0.0;
  WinMethod method = WinMethod::closed_form_simple;
};

namespace detail {

inline void require_positive(double v, const char* name) {
  require(std::isfinite(v) && v > 0.0, std::string(name) + " must be > 0");
}

// ln(s m / n) without overflowing the intermediate product.
inline double log_force_ratio(double s, double m, double n) {
  const double ratio = s * m / n;
  if (std::isfinite(ratio) && ratio > 0.0) return std::log(ratio);
  return std::log(s) + std::log(m) - std::log(n);
}

inline constexpr double kTieLogWidth = 1e-10;

// (1 - rho^m) / (1 - rho^(m+n)) with rho = exp(log_rho), evaluated so that no
// exponential exceeds 1. Inside the tie band the first-order expansion
// m/(m+n) * (1 - n ln(rho) / 2) replaces the ratio of two vanishing terms.
inline double ruin_ratio(double log_rho, double m, double n) {
  if (std::abs(log_rho) < kTieLogWidth) {
    return m / (m + n) * (1.0 - 0.5 * n * log_rho);
  }
  if (log_rho < 0.0) {
    return std::expm1(m * log_rho) / std::expm1((m + n) * log_rho);
  }
  // Divide numerator and denominator by rho^(m+n).
  return std::exp(-n * log_rho) * std::expm1(-m * log_rho) /
         std::expm1(-(m + n) * log_rho);
}

// E(x, j, k) with x given through its logit.
inline double ruin_from_logit(double logit_x, unsigned j, unsigned k) {
  require(j + k >= 1, "E(x, j, k) requires j + k >= 1");
  if (k == 0) return 0.0;
  if (j == 0) return 1.0;
  return ruin_ratio(-logit_x, static_cast<double>(k), static_cast<double>(j));
}

}  // namespace detail

// p = 1 / (1 + s m / n): battle-win probability when each side's chance is
// proportional to the strength of one of its parts.
inline double battle_p_simple(double s, double m, double n) {
  detail::require_positive(s, "s");
  detail::require_positive(m, "m");
  detail::require_positive(n, "n");
  return 1.0 / (1.0 + s * m / n);
}

// Logit of the randomness-softened base probability 1 / (1 + (s m/n)^(1/R)).
inline double base_logit(const BattleModel& model, double m, double n) {
  return -detail::log_force_ratio(model.s, m, n) / model.R;
}

// State-dependent battle-win probability. With gamma = 0 and R = 1 this is
// battle_p_simple exactly.
inline double battle_p_general(const BattleModel& model, double m, double n, int i,
                               GammaConvention convention = GammaConvention::eq10) {
  model.validate();
  detail::require_positive(m, "m");
  detail::require_positive(n, "n");
  const double d = static_cast<double>(i) - n;
  double sign = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  if (convention == GammaConvention::appendix) sign = -sign;
  const double shift = sign * model.gamma;
  if (shift == 0.0) {
    if (model.R == 1.0) return battle_p_simple(model.s, m, n);
    return sigmoid(base_logit(model, m, n));
  }
  return sigmoid(base_logit(model, m, n) + shift);
}

// Overall win probability for a constant battle-win probability p. Real m, n
// are accepted so curves in m can be drawn.
inline double q_constant_p(double p, double m, double n) {
  detail::require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  detail::require_positive(m, "m");
  detail::require_positive(n, "n");
  const double log_rho = std::log1p(-p) - std::log(p);
  return detail::ruin_ratio(log_rho, m, n);
}

// q = (1 - (sm/n)^m) / (1 - (sm/n)^(m+n)), and m/(m+n) at the tie s = n/m.
inline double q_simple(double s, double m, double n) {
  detail::require_positive(s, "s");
  detail::require_positive(m, "m");
  detail::require_positive(n, "n");
  return detail::ruin_ratio(detail::log_force_ratio(s, m, n), m, n);
}

// Win probability of a gambler's ruin in which Player 1 wins each battle with
// probability x, Player 1's goal is j steps away and Player 2's goal k steps.
inline double ruin_win_probability(double x, unsigned j, unsigned k) {
  detail::require(x > 0.0 && x < 1.0, "E(x, j, k): x must lie in (0, 1)");
  return detail::ruin_from_logit(logit(x), j, k);
}

// Closed form for the general (s, R, gamma) model, obtained by splitting the
// chain at the starting state n into the sub-chain toward state 0 (battle
// probability p+) and the sub-chain toward m+n (battle probability p-):
//
//   q = p E(p+, n-1, 1) / (1 - p (1 - E(p+, n-1, 1)) - (1-p) E(p-, 1, m-1))
//
// The denominator is evaluated as p a + (1-p)(1-b), with 1 - E(p-, 1, m-1)
// taken as E(1-p-, m-1, 1).
inline double q_general(const BattleModel& model, unsigned m, unsigned n) {
  model.validate();
  detail::require(m >= 1, "m must be a positive integer");
  detail::require(n >= 1, "n must be a positive integer");
  const double base = base_logit(model, m, n);
  const double p = sigmoid(base);
  const double one_minus_p = sigmoid(-base);
  const double toward_win = detail::ruin_from_logit(base + model.gamma, n - 1, 1);
  const double toward_loss_escape = detail::ruin_from_logit(-(base - model.gamma), m - 1, 1);
  const double num = p * toward_win;
  return num / (num + one_minus_p * toward_loss_escape);
}

// Picks the simple closed form when the model reduces to it.
inline WinProbabilityResult win_probability(const BattleModel& model, unsigned m,
                                            unsigned n) {
  if (model.is_simple()) {
    model.validate();
    return {q_simple(model.s, m, n), WinMethod::closed_form_simple};
  }
  return {q_general(model, m, n), WinMethod::closed_form_general};
}

}  // namespace divconq
