#pragma once

// Fictitious play and regret-matching CFR on strategic-form games. Both start
// every player at the exact uniform strategy, update all players
// simultaneously, and report the unweighted average of the strategies played.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "nashbench/game.hpp"

namespace nashbench {

using StrategyTable = std::vector<std::vector<double>>;

/// Neumaier-compensated running sum, one slot per coordinate.
class CompensatedVector {
 public:
  explicit CompensatedVector(std::size_t n = 0) : sum_(n, 0.0), carry_(n, 0.0) {}

  void add(std::span<const double> x) {
    for (std::size_t k = 0; k < sum_.size(); ++k) {
      const double t = sum_[k] + x[k];
      if (std::abs(sum_[k]) >= std::abs(x[k])) {
        carry_[k] += (sum_[k] - t) + x[k];
      } else {
        carry_[k] += (x[k] - t) + sum_[k];
      }
      sum_[k] = t;
    }
  }

  double value(std::size_t k) const { return sum_[k] + carry_[k]; }
  std::size_t size() const { return sum_.size(); }

  std::vector<double> values() const {
    std::vector<double> out(sum_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = value(k);
    return out;
  }

 private:
  std::vector<double> sum_;
  std::vector<double> carry_;
};

struct SolveOptions {
  /// Iterations (1-based, each in [1, T]) at which to record epsilon of the
  /// running average.
  std::vector<int> checkpoints;
  /// Called once per iteration t with the strategies played at t.
  std::function<void(int, const StrategyTable&)> on_played;
};

struct SolveResult {
  Profile average_profile;
  int iterations = 0;
  std::vector<int> checkpoints;
  std::vector<double> epsilon_trace;
};

/// Proportional to positive cumulative regret; uniform when none is positive.
inline MixedStrategy regret_match(std::span<const double> cumulative) {
  if (cumulative.empty()) {
    throw std::invalid_argument("regret_match needs at least one action");
  }
  std::vector<double> p(cumulative.size());
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = std::max(cumulative[k], 0.0);
    total += p[k];
  }
  if (total > 0.0) {
    for (double& x : p) x /= total;
  } else {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
  }
  return MixedStrategy(std::move(p));
}

/// r(k) = u_i(k, s_{-i}) - u_i(s) for every player i and pure strategy k.
inline StrategyTable instantaneous_regrets(const Game& game, const StrategyTable& current) {
  detail::check_shape(game, current, 0);
  StrategyTable regrets(current.size());
  for (int i = 0; i < game.num_players(); ++i) {
    auto values = detail::deviation_values(game, current, i);
    const double own = detail::dot(values, current[i]);
    for (double& v : values) v -= own;
    regrets[i] = std::move(values);
  }
  return regrets;
}

/// Cumulative regrets R^t per player and action.
class RegretState {
 public:
  explicit RegretState(const Game& game) {
    for (int c : game.strategy_counts()) cumulative_.emplace_back(static_cast<std::size_t>(c));
  }

  /// Adds one iteration's instantaneous regrets.
  void accumulate(const StrategyTable& regrets) {
    for (std::size_t i = 0; i < cumulative_.size(); ++i) cumulative_[i].add(regrets[i]);
    ++iteration_;
  }

  std::vector<double> cumulative(int player) const { return cumulative_.at(player).values(); }
  int iteration() const { return iteration_; }

  StrategyTable next_strategies() const {
    StrategyTable out;
    out.reserve(cumulative_.size());
    for (const auto& c : cumulative_) out.push_back(regret_match(c.values()).probs());
    return out;
  }

 private:
  std::vector<CompensatedVector> cumulative_;
  int iteration_ = 0;
};

namespace detail {

inline void check_run_args(int iterations, const std::vector<int>& checkpoints) {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  for (int c : checkpoints) {
    if (c < 1 || c > iterations) {
      throw std::invalid_argument("checkpoint " + std::to_string(c) +
                                  " outside [1, iterations]");
    }
  }
}

inline std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline StrategyTable uniform_table(const Game& game) {
  StrategyTable t;
  for (int c : game.strategy_counts()) {
    t.emplace_back(static_cast<std::size_t>(c), 1.0 / c);
  }
  return t;
}

// Tracks the running sum of played strategies and the epsilon trace.
class Averager {
 public:
  Averager(const Game& game, std::vector<int> checkpoints)
      : game_(game), checkpoints_(sorted_unique(std::move(checkpoints))) {
    for (int c : game.strategy_counts()) sums_.emplace_back(static_cast<std::size_t>(c));
  }

  void add(int t, const StrategyTable& played) {
    for (std::size_t i = 0; i < sums_.size(); ++i) sums_[i].add(played[i]);
    count_ = t;
    if (next_ < checkpoints_.size() && checkpoints_[next_] == t) {
      trace_.push_back(epsilon(game_, average()));
      ++next_;
    }
  }

  StrategyTable average() const {
    StrategyTable avg(sums_.size());
    for (std::size_t i = 0; i < sums_.size(); ++i) {
      avg[i] = sums_[i].values();
      for (double& x : avg[i]) x /= count_;
    }
    return avg;
  }

  SolveResult finish() const {
    std::vector<MixedStrategy> strategies;
    for (auto& s : average()) strategies.emplace_back(std::move(s));
    return {Profile(std::move(strategies)), count_, checkpoints_, trace_};
  }

 private:
  const Game& game_;
  std::vector<int> checkpoints_;
  std::vector<CompensatedVector> sums_;
  std::vector<double> trace_;
  std::size_t next_ = 0;
  int count_ = 0;
};

}  // namespace detail

/// Fictitious play. Iteration 1 plays the uniform profile; each later
/// iteration t plays every player's lowest-index pure best response to the
/// average of iterations 1..t-1. Returns the average of all T played
/// strategies.
inline SolveResult fp_run(const Game& game, int iterations, const SolveOptions& options = {}) {
  detail::check_run_args(iterations, options.checkpoints);
  detail::Averager averager(game, options.checkpoints);

  StrategyTable played = detail::uniform_table(game);
  for (int t = 1; t <= iterations; ++t) {
    if (t > 1) {
      const StrategyTable previous = averager.average();
      for (int i = 0; i < game.num_players(); ++i) {
        const auto values = detail::deviation_values(game, previous, i);
        const auto best = std::max_element(values.begin(), values.end()) - values.begin();
        std::fill(played[i].begin(), played[i].end(), 0.0);
        played[i][static_cast<std::size_t>(best)] = 1.0;
      }
    }
    if (options.on_played) options.on_played(t, played);
    averager.add(t, played);
  }
  return averager.finish();
}

/// Regret-matching CFR. sigma^1 is uniform; after playing sigma^t, every
/// player's regrets against sigma^t are accumulated and sigma^{t+1} is the
/// regret-matched strategy. Returns the average of sigma^1..sigma^T.
inline SolveResult cfr_run(const Game& game, int iterations, const SolveOptions& options = {}) {
  detail::check_run_args(iterations, options.checkpoints);
  detail::Averager averager(game, options.checkpoints);
  RegretState regrets(game);

  StrategyTable current = detail::uniform_table(game);
  for (int t = 1; t <= iterations; ++t) {
    if (options.on_played) options.on_played(t, current);
    averager.add(t, current);
    if (t == iterations) break;
    regrets.accumulate(instantaneous_regrets(game, current));
    current = regrets.next_strategies();
  }
  return averager.finish();
}

}  // namespace nashbench
