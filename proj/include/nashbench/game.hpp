#pragma once

// Strategic-form games, mixed strategies, and the quantities derived from
// them: expected utility, pure-deviation values, best responses, and the
// epsilon of a profile (the largest gain any single player can obtain by
// deviating unilaterally).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nashbench {

/// Absolute tolerance on simplex membership for mixed strategies.
inline constexpr double kProbabilityTolerance = 1e-9;

/// Gains at or below this are treated as zero by epsilon().
inline constexpr double kDeviationTolerance = 1e-12;

/// An n-player strategic-form game stored as one flat payoff tensor per
/// player. Joint pure profiles are indexed lexicographically with player 0's
/// strategy varying fastest, which is also the `.nfg` payoff order.
class Game {
 public:
  Game(std::vector<int> strategy_counts,
       std::vector<std::vector<double>> payoffs)
      : counts_(std::move(strategy_counts)), payoffs_(std::move(payoffs)) {
    if (counts_.empty()) {
      throw std::invalid_argument("game must have at least one player");
    }
    num_profiles_ = 1;
    for (int c : counts_) {
      if (c < 1) {
        throw std::invalid_argument("strategy counts must be >= 1");
      }
      num_profiles_ *= static_cast<std::size_t>(c);
    }
    if (payoffs_.size() != counts_.size()) {
      throw std::invalid_argument("expected one payoff tensor per player");
    }
    for (const auto& tensor : payoffs_) {
      if (tensor.size() != num_profiles_) {
        throw std::invalid_argument(
            "payoff tensor length " + std::to_string(tensor.size()) +
            " does not match " + std::to_string(num_profiles_) +
            " joint profiles");
      }
      for (double u : tensor) {
        if (!std::isfinite(u)) {
          throw std::invalid_argument("payoffs must be finite");
        }
      }
    }
  }

  int num_players() const { return static_cast<int>(counts_.size()); }
  const std::vector<int>& strategy_counts() const { return counts_; }
  int num_strategies(int player) const { return counts_.at(player); }
  std::size_t num_profiles() const { return num_profiles_; }

  std::span<const double> payoffs(int player) const {
    return payoffs_.at(player);
  }

  /// Flat index of a joint pure profile.
  std::size_t profile_index(std::span<const int> actions) const {
    if (actions.size() != counts_.size()) {
      throw std::invalid_argument("profile has wrong number of players");
    }
    std::size_t index = 0;
    std::size_t stride = 1;
    for (std::size_t j = 0; j < counts_.size(); ++j) {
      if (actions[j] < 0 || actions[j] >= counts_[j]) {
        throw std::out_of_range("action index out of range");
      }
      index += stride * static_cast<std::size_t>(actions[j]);
      stride *= static_cast<std::size_t>(counts_[j]);
    }
    return index;
  }

  double payoff(int player, std::span<const int> actions) const {
    return payoffs_.at(player)[profile_index(actions)];
  }

  double min_payoff() const {
    double lo = payoffs_[0][0];
    for (const auto& t : payoffs_) lo = std::min(lo, *std::min_element(t.begin(), t.end()));
    return lo;
  }

  double max_payoff() const {
    double hi = payoffs_[0][0];
    for (const auto& t : payoffs_) hi = std::max(hi, *std::max_element(t.begin(), t.end()));
    return hi;
  }

  friend bool operator==(const Game&, const Game&) = default;

 private:
  std::vector<int> counts_;
  std::vector<std::vector<double>> payoffs_;
  std::size_t num_profiles_ = 0;
};

/// A probability distribution over one player's pure strategies.
class MixedStrategy {
 public:
  explicit MixedStrategy(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
      throw std::invalid_argument("mixed strategy must be non-empty");
    }
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("probabilities must be finite and >= 0");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      throw std::invalid_argument("probabilities must sum to 1, got " +
                                  std::to_string(total));
    }
  }

  static MixedStrategy uniform(int m) {
    return MixedStrategy(std::vector<double>(static_cast<std::size_t>(m), 1.0 / m));
  }

  static MixedStrategy pure(int m, int action) {
    std::vector<double> p(static_cast<std::size_t>(m), 0.0);
    p.at(static_cast<std::size_t>(action)) = 1.0;
    return MixedStrategy(std::move(p));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t k) const { return probs_[k]; }
  const std::vector<double>& probs() const { return probs_; }

  friend bool operator==(const MixedStrategy&, const MixedStrategy&) = default;

 private:
  std::vector<double> probs_;
};

/// One mixed strategy per player.
class Profile {
 public:
  explicit Profile(std::vector<MixedStrategy> strategies)
      : strategies_(std::move(strategies)) {
    if (strategies_.empty()) {
      throw std::invalid_argument("profile must contain at least one strategy");
    }
  }

  static Profile uniform(const Game& game) {
    std::vector<MixedStrategy> s;
    s.reserve(static_cast<std::size_t>(game.num_players()));
    for (int c : game.strategy_counts()) s.push_back(MixedStrategy::uniform(c));
    return Profile(std::move(s));
  }

  static Profile pure(const Game& game, std::span<const int> actions) {
    if (actions.size() != static_cast<std::size_t>(game.num_players())) {
      throw std::invalid_argument("profile has wrong number of players");
    }
    std::vector<MixedStrategy> s;
    for (int j = 0; j < game.num_players(); ++j) {
      s.push_back(MixedStrategy::pure(game.num_strategies(j), actions[j]));
    }
    return Profile(std::move(s));
  }

  int num_players() const { return static_cast<int>(strategies_.size()); }
  const MixedStrategy& operator[](int player) const { return strategies_.at(player); }
  const std::vector<MixedStrategy>& strategies() const { return strategies_; }

  friend bool operator==(const Profile&, const Profile&) = default;

 private:
  std::vector<MixedStrategy> strategies_;
};

namespace detail {

inline std::span<const double> probs_of(const MixedStrategy& s) { return s.probs(); }
inline std::span<const double> probs_of(const std::vector<double>& s) { return s; }

template <typename StrategyVec>
void check_shape(const Game& game, const std::vector<StrategyVec>& strategies,
                 int player) {
  if (player < 0 || player >= game.num_players()) {
    throw std::out_of_range("player index " + std::to_string(player) +
                            " out of range");
  }
  if (strategies.size() != static_cast<std::size_t>(game.num_players())) {
    throw std::invalid_argument("profile/game player count mismatch");
  }
  for (int j = 0; j < game.num_players(); ++j) {
    if (probs_of(strategies[j]).size() !=
        static_cast<std::size_t>(game.num_strategies(j))) {
      throw std::invalid_argument("profile/game strategy count mismatch");
    }
  }
}

// Contracts axis `axis` of a tensor with extents `dims` (axis 0 fastest)
// against `weights`, writing the reduced tensor into `out`.
inline void contract_axis(std::span<const double> in, std::span<const int> dims,
                          std::size_t axis, std::span<const double> weights,
                          std::vector<double>& out) {
  std::size_t inner = 1;
  for (std::size_t j = 0; j < axis; ++j) inner *= static_cast<std::size_t>(dims[j]);
  const auto extent = static_cast<std::size_t>(dims[axis]);
  const std::size_t outer = in.size() / (inner * extent);
  out.assign(inner * outer, 0.0);

  if (inner == 1) {
    for (std::size_t b = 0; b < outer; ++b) {
      const double* row = in.data() + b * extent;
      double acc = 0.0;
      for (std::size_t k = 0; k < extent; ++k) acc += weights[k] * row[k];
      out[b] = acc;
    }
    return;
  }
  for (std::size_t b = 0; b < outer; ++b) {
    double* dst = out.data() + b * inner;
    for (std::size_t k = 0; k < extent; ++k) {
      const double w = weights[k];
      if (w == 0.0) continue;
      const double* src = in.data() + (b * extent + k) * inner;
      for (std::size_t a = 0; a < inner; ++a) dst[a] += w * src[a];
    }
  }
}

/// Expected payoff to `player` for each of its pure strategies while everyone
/// else follows `strategies`. Unchecked.
template <typename StrategyVec>
std::vector<double> deviation_values(const Game& game,
                                     const std::vector<StrategyVec>& strategies,
                                     int player) {
  std::vector<int> dims = game.strategy_counts();
  std::vector<double> current;
  std::vector<double> next;
  std::span<const double> tensor = game.payoffs(player);

  // Slow axes first: each step is a strided axpy over contiguous blocks.
  for (int j = game.num_players() - 1; j > player; --j) {
    contract_axis(tensor, dims, static_cast<std::size_t>(j), probs_of(strategies[j]), next);
    dims.pop_back();
    current.swap(next);
    tensor = current;
  }
  // Then the fast axes, each a batch of short dot products.
  for (int j = 0; j < player; ++j) {
    contract_axis(tensor, dims, 0, probs_of(strategies[j]), next);
    dims.erase(dims.begin());
    current.swap(next);
    tensor = current;
  }
  return std::vector<double>(tensor.begin(), tensor.end());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

template <typename StrategyVec>
double epsilon(const Game& game, const std::vector<StrategyVec>& strategies) {
  double worst = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto values = deviation_values(game, strategies, i);
    const double best = *std::max_element(values.begin(), values.end());
    worst = std::max(worst, best - dot(values, probs_of(strategies[i])));
  }
  return worst > kDeviationTolerance ? worst : 0.0;
}

}  // namespace detail

/// Entry k is u_player(k, profile_{-player}).
inline std::vector<double> deviation_values(const Game& game, const Profile& profile,
                                            int player) {
  detail::check_shape(game, profile.strategies(), player);
  return detail::deviation_values(game, profile.strategies(), player);
}

/// Multilinear extension of the player's payoff to mixed profiles.
inline double expected_utility(const Game& game, const Profile& profile, int player) {
  const auto values = deviation_values(game, profile, player);
  return detail::dot(values, profile[player].probs());
}

struct BestResponse {
  int index = 0;
  double value = 0.0;
};

/// Pure best response; ties go to the lowest index.
inline BestResponse best_response(const Game& game, const Profile& profile, int player) {
  const auto values = deviation_values(game, profile, player);
  const auto it = std::max_element(values.begin(), values.end());
  return {static_cast<int>(it - values.begin()), *it};
}

/// max over players of (best pure deviation value - expected utility),
/// clamped so that gains within kDeviationTolerance report as exactly 0.
inline double epsilon(const Game& game, const Profile& profile) {
  detail::check_shape(game, profile.strategies(), 0);
  return detail::epsilon(game, profile.strategies());
}

/// Affinely maps all payoffs, pooled across players, onto [0, 1]. A constant
/// game maps to all zeros.
inline Game normalize(const Game& game) {
  const double lo = game.min_payoff();
  const double range = game.max_payoff() - lo;
  std::vector<std::vector<double>> scaled;
  scaled.reserve(static_cast<std::size_t>(game.num_players()));
  for (int i = 0; i < game.num_players(); ++i) {
    const auto src = game.payoffs(i);
    std::vector<double> t(src.size());
    for (std::size_t k = 0; k < src.size(); ++k) {
      t[k] = range > 0.0 ? (src[k] - lo) / range : 0.0;
    }
    scaled.push_back(std::move(t));
  }
  return Game(game.strategy_counts(), std::move(scaled));
}

}  // namespace nashbench
