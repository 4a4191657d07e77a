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

// Unity-optimality checks, the critical-strength search and optimal coalition
// structure.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "divconq/battle_models.hpp"
#include "divconq/error.hpp"

namespace divconq {

struct ModelParams {
  double s = 1.0;
  unsigned n = 1;
  double R = 1.0;
  double gamma = 0.0;

  BattleModel model() const { return {s, R, gamma}; }
};

// q(m) under the simple closed form when R = 1 and gamma = 0, the general one
// otherwise.
inline double q_of_m(const ModelParams& params, unsigned m) {
  return win_probability(params.model(), m, params.n).q;
}

struct MonotonicityViolation {
  unsigned m = 0;
  double q_m = 0.0;
  double q_next = 0.0;
};

struct MonotonicityReport {
  ModelParams params;
  unsigned m_max = 0;
  bool monotone_decreasing = false;
  std::optional<MonotonicityViolation> first_violation;
  double q_tail = 0.0;
  std::vector<double> q;  // q[k] = q(k + 1)
};

// Checks q(1) > q(2) > ... > q(m_max).
inline MonotonicityReport verify_unity_optimal(const ModelParams& params, unsigned m_max) {
  params.model().validate();
  detail::require(params.n >= 1, "n must be a positive integer");
  detail::require(m_max >= 2, "m_max must be >= 2");
  MonotonicityReport report;
  report.params = params;
  report.m_max = m_max;
  report.q.reserve(m_max);
  for (unsigned m = 1; m <= m_max; ++m) report.q.push_back(q_of_m(params, m));
  for (unsigned m = 1; m < m_max; ++m) {
    const double cur = report.q[m - 1];
    const double next = report.q[m];
    if (!(next < cur)) {
      report.first_violation = MonotonicityViolation{m, cur, next};
      break;
    }
  }
  report.monotone_decreasing = !report.first_violation.has_value();
  report.q_tail = report.q.back();
  return report;
}

// Index of the first maximum; ties resolve toward the smaller index.
inline std::size_t first_argmax(std::span<const double> values) {
  detail::require(!values.empty(), "argmax of an empty range");
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

inline unsigned optimal_m(const ModelParams& params, unsigned m_max) {
  params.model().validate();
  detail::require(params.n >= 1, "n must be a positive integer");
  detail::require(m_max >= 1, "m_max must be >= 1");
  std::vector<double> q;
  q.reserve(m_max);
  for (unsigned m = 1; m <= m_max; ++m) q.push_back(q_of_m(params, m));
  return static_cast<unsigned>(first_argmax(q)) + 1;
}

class NonMonotonePredicate : public DomainError {
 public:
  using DomainError::DomainError;
};

struct CriticalStrengthOptions {
  double tolerance = 1e-6;
  unsigned monotonicity_samples = 64;  // log-spaced probes over the bracket
};

struct CriticalStrength {
  double s_star = 0.0;
  double s_below = 0.0;  // largest probed strength at which the check fails
  unsigned iterations = 0;
};

// Smallest s (to within tolerance) for which q is strictly decreasing over
// m = 1..m_max. The predicate must fail at s_lo, pass at s_hi, and switch only
// once over the sampled bracket.
inline CriticalStrength find_critical_strength(unsigned n, double R, double gamma,
                                               unsigned m_max, double s_lo, double s_hi,
                                               const CriticalStrengthOptions& options = {}) {
  detail::require(std::isfinite(s_lo) && s_lo > 0.0, "s_lo must be > 0");
  detail::require(std::isfinite(s_hi) && s_hi > s_lo, "s_hi must exceed s_lo");
  detail::require(options.tolerance > 0.0, "tolerance must be > 0");
  auto passes = [&](double s) {
    return verify_unity_optimal(ModelParams{s, n, R, gamma}, m_max).monotone_decreasing;
  };
  detail::require(!passes(s_lo), "bracket invalid: unity already optimal at s_lo");
  detail::require(passes(s_hi), "bracket invalid: unity not optimal at s_hi");

  if (options.monotonicity_samples >= 2) {
    const double log_lo = std::log(s_lo);
    const double step = (std::log(s_hi) - log_lo) / (options.monotonicity_samples - 1);
    bool seen_pass = false;
    for (unsigned k = 0; k < options.monotonicity_samples; ++k) {
      const double s = std::exp(log_lo + step * k);
      const bool ok = passes(s);
      if (seen_pass && !ok) {
        throw NonMonotonePredicate("unity-optimality predicate is not monotone in s over [" +
                                   std::to_string(s_lo) + ", " + std::to_string(s_hi) +
                                   "]: fails again at s=" + std::to_string(s));
      }
      seen_pass = seen_pass || ok;
    }
  }

  CriticalStrength out;
  double lo = s_lo;
  double hi = s_hi;
  while (hi - lo > options.tolerance) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (passes(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++out.iterations;
  }
  out.s_star = hi;
  out.s_below = lo;
  return out;
}

}  // namespace divconq
