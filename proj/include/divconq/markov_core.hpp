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

// The absorbing birth-death chain over states 0..m+n. From an interior state
// i, Movement 1 wins the battle with probability p_i and the state moves to
// i-1; otherwise it moves to i+1. States 0 and m+n absorb.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <stdexcept>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "divconq/battle_models.hpp"
#include "divconq/error.hpp"

namespace divconq {

struct ConflictShape {
  unsigned m = 1;
  unsigned n = 1;

  void validate() const {
    detail::require(m >= 1, "m must be a positive integer");
    detail::require(n >= 1, "n must be a positive integer");
  }
  std::size_t state_count() const { return std::size_t{m} + n + 1; }
  std::size_t initial_state() const { return n; }
  std::size_t last_state() const { return std::size_t{m} + n; }
};

class ConflictChain {
 public:
  // p holds p_1..p_{m+n-1}; each entry must lie strictly inside (0, 1).
  ConflictChain(ConflictShape shape, std::vector<double> p)
      : shape_(shape), p_(std::move(p)) {
    shape_.validate();
    detail::require(p_.size() == shape_.last_state() - 1,
                    "battle-win vector must have m+n-1 entries");
    for (std::size_t k = 0; k < p_.size(); ++k) {
      detail::require(p_[k] > 0.0 && p_[k] < 1.0,
                      "battle-win probability at state " + std::to_string(k + 1) +
                          " must lie in (0, 1)");
    }
  }

  const ConflictShape& shape() const { return shape_; }
  std::span<const double> battle_win() const { return p_; }
  // p_i for interior state i in [1, m+n-1].
  double battle_win(std::size_t state) const { return p_[state - 1]; }

 private:
  ConflictShape shape_;
  std::vector<double> p_;
};

inline ConflictChain build_chain(ConflictShape shape, double p) {
  shape.validate();
  detail::require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  return ConflictChain(shape, std::vector<double>(shape.last_state() - 1, p));
}

inline ConflictChain build_chain(ConflictShape shape, const BattleModel& model,
                                 GammaConvention convention = GammaConvention::eq10) {
  shape.validate();
  model.validate();
  std::vector<double> p;
  p.reserve(shape.last_state() - 1);
  for (std::size_t i = 1; i < shape.last_state(); ++i) {
    p.push_back(battle_p_general(model, shape.m, shape.n, static_cast<int>(i), convention));
  }
  return ConflictChain(shape, std::move(p));
}

struct StateDistribution {
  std::vector<double> probabilities;

  double operator[](std::size_t state) const { return probabilities[state]; }
  double interior_mass() const {
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < probabilities.size(); ++i) sum += probabilities[i];
    return sum;
  }
};

// Distribution after exactly `steps` battles, starting from the point mass at
// state n.
inline StateDistribution evolve(const ConflictChain& chain, std::uint64_t steps) {
  const std::size_t last = chain.shape().last_state();
  std::vector<double> cur(last + 1, 0.0);
  std::vector<double> next(last + 1, 0.0);
  cur[chain.shape().initial_state()] = 1.0;
  for (std::uint64_t t = 0; t < steps; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    next[0] = cur[0];
    next[last] = cur[last];
    for (std::size_t i = 1; i < last; ++i) {
      const double p = chain.battle_win(i);
      next[i - 1] += p * cur[i];
      next[i + 1] += (1.0 - p) * cur[i];
    }
    cur.swap(next);
  }
  return StateDistribution{std::move(cur)};
}

// Probability h_i of reaching state 0 before m+n from every state i. Solves
// h_i = p_i h_{i-1} + (1 - p_i) h_{i+1}, h_0 = 1, h_{m+n} = 0 with the Thomas
// algorithm.
inline std::vector<double> absorption_probabilities(const ConflictChain& chain) {
  const std::size_t last = chain.shape().last_state();
  std::vector<double> h(last + 1, 0.0);
  h[0] = 1.0;
  const std::size_t k = last - 1;  // unknowns h_1..h_{last-1}
  std::vector<double> c_prime(k + 1, 0.0);
  std::vector<double> d_prime(k + 1, 0.0);
  for (std::size_t i = 1; i <= k; ++i) {
    const double sub = -chain.battle_win(i);
    const double super = -(1.0 - chain.battle_win(i));
    const double rhs = i == 1 ? chain.battle_win(1) : 0.0;
    const double w = i == 1 ? 1.0 : 1.0 - sub * c_prime[i - 1];
    c_prime[i] = super / w;
    d_prime[i] = i == 1 ? rhs / w : (rhs - sub * d_prime[i - 1]) / w;
  }
  h[k] = d_prime[k];
  for (std::size_t i = k; i-- > 1;) h[i] = d_prime[i] - c_prime[i] * h[i + 1];
  return h;
}

inline double absorption_q_solve(const ConflictChain& chain) {
  return absorption_probabilities(chain)[chain.shape().initial_state()];
}

// Monte Carlo ------------------------------------------------------------

inline constexpr const char* kGeneratorName = "mt19937_64 (splitmix64 worker seeds)";
inline constexpr std::uint64_t kMaxWalkSteps = 1'000'000'000ULL;

struct McEstimate {
  double q_hat = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  unsigned partitions = 1;
};

class WalkLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// splitmix64 step; used to derive one seed per worker from the user seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Worker k receives the (k+1)-th splitmix64 output of `seed`.
inline std::vector<std::uint64_t> worker_seeds(std::uint64_t seed, unsigned partitions) {
  std::vector<std::uint64_t> out;
  out.reserve(partitions);
  std::uint64_t state = seed;
  for (unsigned k = 0; k < partitions; ++k) out.push_back(splitmix64(state));
  return out;
}

namespace detail {

// Uniform on [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t count_wins(const ConflictChain& chain, std::uint64_t trials,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t last = chain.shape().last_state();
  const auto p = chain.battle_win();
  std::uint64_t wins = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::size_t state = chain.shape().initial_state();
    std::uint64_t steps = 0;
    while (state != 0 && state != last) {
      if (uniform01(rng) < p[state - 1]) {
        --state;
      } else {
        ++state;
      }
      if (++steps > kMaxWalkSteps) {
        throw WalkLimitExceeded("walk exceeded " + std::to_string(kMaxWalkSteps) +
                                " steps without absorption");
      }
    }
    if (state == 0) ++wins;
  }
  return wins;
}

}  // namespace detail

// Runs `trials` walks from state n split across `partitions` workers. The
// result depends only on (seed, trials, partitions).
inline McEstimate simulate(const ConflictChain& chain, std::uint64_t trials,
                           std::uint64_t seed, unsigned partitions = 1) {
  detail::require(trials >= 1, "trials must be >= 1");
  detail::require(partitions >= 1, "partitions must be >= 1");
  const auto seeds = worker_seeds(seed, partitions);
  std::vector<std::uint64_t> wins(partitions, 0);
  std::vector<std::exception_ptr> errors(partitions);
  auto work = [&](unsigned k) {
    const std::uint64_t share = trials / partitions + (k < trials % partitions ? 1 : 0);
    try {
      wins[k] = detail::count_wins(chain, share, seeds[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (partitions == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(partitions);
    for (unsigned k = 0; k < partitions; ++k) pool.emplace_back(work, k);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::uint64_t total = 0;
  for (auto w : wins) total += w;
  McEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.partitions = partitions;
  est.q_hat = static_cast<double>(total) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.q_hat * (1.0 - est.q_hat) / static_cast<double>(trials));
  return est;
}

}  // namespace divconq
