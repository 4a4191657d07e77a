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

// Coalition payoffs and the unanimity vote on greater unity.
//
// A member of Movement 1 compares the status quo (m0 parts, no cost) with
// greater unity (m1 < m0 parts, up-front cost c). Victory pays b every
// period, discounted at rate r, so its present value is b / (e^r - 1).

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "divconq/battle_models.hpp"
#include "divconq/error.hpp"

namespace divconq {

// One member's perceived parameters.
struct MemberProfile {
  double r = 1.0;      // discount rate per period
  double b = 1.0;      // per-period benefit of victory, negative for collaborationists
  double c = 1.0;      // up-front cost of greater unity
  double s_hat = 1.0;  // perceived strength of Movement 2

  void validate() const {
    detail::require(std::isfinite(r) && r > 0.0, "r must be > 0");
    detail::require(std::isfinite(b), "b must be finite");
    detail::require(std::isfinite(c) && c > 0.0, "c must be > 0");
    detail::require(std::isfinite(s_hat) && s_hat > 0.0, "s_hat must be > 0");
  }
};

struct UnityDecision {
  unsigned m0 = 2;  // status quo
  unsigned m1 = 1;  // greater unity

  void validate() const {
    detail::require(m1 >= 1, "m1 must be a positive integer");
    detail::require(m1 < m0, "greater unity requires m1 < m0");
  }
};

struct PayoffPair {
  double status_quo = 0.0;
  double greater_unity = 0.0;
};

struct ArchetypeFlags {
  bool myopic = false;
  bool naive = false;
  bool collaborationist = false;
  bool defeatist = false;
  bool complacent = false;
};

struct ClassificationThresholds {
  double r_myopic;
  double bc_naive;
  double s_defeatist;
  double s_complacent;

  void validate() const {
    detail::require(r_myopic > 0.0, "r_myopic must be > 0");
    detail::require(std::isfinite(bc_naive), "bc_naive must be finite");
    detail::require(s_complacent > 0.0 && s_defeatist > 0.0,
                    "strength thresholds must be > 0");
    detail::require(s_complacent < s_defeatist,
                    "s_complacent must be smaller than s_defeatist");
  }
};

// b / (e^r - 1), the present value of receiving b every period from the next
// one on.
inline double discounted_total_benefit(double b, double r) {
  detail::require(std::isfinite(r) && r > 0.0, "r must be > 0");
  return b / std::expm1(r);
}

inline PayoffPair expected_payoffs(const MemberProfile& member, double q0, double q1) {
  member.validate();
  const double value = discounted_total_benefit(member.b, member.r);
  return {q0 * value, -member.c + q1 * value};
}

// Perceived win probabilities (q(m0), q(m1)) for a member.
struct PerceivedWin {
  double q0 = 0.0;
  double q1 = 0.0;
  double delta() const { return q1 - q0; }
};

inline PerceivedWin perceived_win(const MemberProfile& member, const UnityDecision& decision,
                                  unsigned n) {
  member.validate();
  decision.validate();
  detail::require(n >= 1, "n must be a positive integer");
  return {q_simple(member.s_hat, decision.m0, n), q_simple(member.s_hat, decision.m1, n)};
}

// Same, with q from the general (R, gamma) model at s = s_hat.
inline PerceivedWin perceived_win(const MemberProfile& member, const UnityDecision& decision,
                                  unsigned n, double R, double gamma) {
  member.validate();
  decision.validate();
  detail::require(n >= 1, "n must be a positive integer");
  const BattleModel model{member.s_hat, R, gamma};
  return {win_probability(model, decision.m0, n).q, win_probability(model, decision.m1, n).q};
}

// (1 / (e^r - 1)) (b / c) (q(m1) - q(m0)); the member defects when this is
// below 1.
inline double incentive_from(const MemberProfile& member, const PerceivedWin& win) {
  member.validate();
  return discounted_total_benefit(member.b / member.c, member.r) * win.delta();
}

inline double incentive(const MemberProfile& member, const UnityDecision& decision,
                        unsigned n) {
  return incentive_from(member, perceived_win(member, decision, n));
}

inline double incentive(const MemberProfile& member, const UnityDecision& decision,
                        unsigned n, double R, double gamma) {
  return incentive_from(member, perceived_win(member, decision, n, R, gamma));
}

// Indifference (incentive == 1) counts as voting for greater unity.
inline bool defects(const MemberProfile& member, const UnityDecision& decision, unsigned n) {
  return incentive(member, decision, n) < 1.0;
}

struct CoalitionVote {
  std::vector<MemberProfile> members;
  UnityDecision decision;
  unsigned n = 1;
  double actual_s = 1.0;  // reported next to the perceived values, never used to decide
};

struct MemberVerdict {
  double q0_perceived = 0.0;
  double q1_perceived = 0.0;
  double q0_actual = 0.0;
  double q1_actual = 0.0;
  double incentive = 0.0;
  bool defects = false;
};

struct NashCheck {
  bool is_nash = true;
  std::vector<MemberVerdict> members;
};

// Unanimous greater unity (G, ..., G) is a pure Nash equilibrium iff no voter
// gains by vetoing. An empty vote is vacuously an equilibrium.
inline NashCheck unanimous_unity_is_nash(const CoalitionVote& vote) {
  vote.decision.validate();
  detail::require(vote.n >= 1, "n must be a positive integer");
  detail::require(std::isfinite(vote.actual_s) && vote.actual_s > 0.0, "s must be > 0");
  const double q0_actual = q_simple(vote.actual_s, vote.decision.m0, vote.n);
  const double q1_actual = q_simple(vote.actual_s, vote.decision.m1, vote.n);
  NashCheck out;
  out.members.reserve(vote.members.size());
  for (const auto& member : vote.members) {
    const auto win = perceived_win(member, vote.decision, vote.n);
    MemberVerdict v;
    v.q0_perceived = win.q0;
    v.q1_perceived = win.q1;
    v.q0_actual = q0_actual;
    v.q1_actual = q1_actual;
    v.incentive = incentive_from(member, win);
    v.defects = v.incentive < 1.0;
    if (v.defects) out.is_nash = false;
    out.members.push_back(v);
  }
  return out;
}

// Archetype flags from explicit cutoffs. decision and n are accepted for
// symmetry with incentive() and validated, but the flags depend only on the
// member's own parameters.
inline ArchetypeFlags classify(const MemberProfile& member, const UnityDecision& decision,
                               unsigned n, const ClassificationThresholds& thresholds) {
  member.validate();
  decision.validate();
  thresholds.validate();
  detail::require(n >= 1, "n must be a positive integer");
  ArchetypeFlags flags;
  flags.collaborationist = member.b < 0.0;
  flags.myopic = member.r >= thresholds.r_myopic;
  flags.naive = member.b > 0.0 && member.b / member.c <= thresholds.bc_naive;
  flags.defeatist = member.s_hat >= thresholds.s_defeatist;
  flags.complacent = member.s_hat <= thresholds.s_complacent;
  return flags;
}

}  // namespace divconq
