#pragma once

// Brute-force reference implementations used only by the tests. They walk
// every joint pure profile explicitly and share no code with the tensor
// contraction path in the library.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "nashbench/game.hpp"
#include "nashbench/gamegen.hpp"

namespace oracle {

using Table = std::vector<std::vector<double>>;

inline Table to_table(const nashbench::Profile& p) {
  Table t;
  for (const auto& s : p.strategies()) t.push_back(s.probs());
  return t;
}

// Calls f(actions, flat_index) for every joint pure profile, player 0 fastest.
template <typename F>
void for_each_profile(const std::vector<int>& counts, F&& f) {
  std::vector<int> actions(counts.size(), 0);
  std::size_t index = 0;
  while (true) {
    f(actions, index++);
    std::size_t j = 0;
    while (j < counts.size() && ++actions[j] == counts[j]) actions[j++] = 0;
    if (j == counts.size()) return;
  }
}

inline std::vector<double> deviation_values(const nashbench::Game& g, const Table& s, int player) {
  std::vector<double> values(static_cast<std::size_t>(g.num_strategies(player)), 0.0);
  for_each_profile(g.strategy_counts(), [&](const std::vector<int>& a, std::size_t) {
    double w = 1.0;
    for (int j = 0; j < g.num_players(); ++j) {
      if (j != player) w *= s[j][a[j]];
    }
    values[a[player]] += w * g.payoff(player, a);
  });
  return values;
}

inline double expected_utility(const nashbench::Game& g, const Table& s, int player) {
  double total = 0.0;
  for_each_profile(g.strategy_counts(), [&](const std::vector<int>& a, std::size_t) {
    double w = 1.0;
    for (int j = 0; j < g.num_players(); ++j) w *= s[j][a[j]];
    total += w * g.payoff(player, a);
  });
  return total;
}

// Exhaustive pure-deviation enumeration, no clamping.
inline double epsilon(const nashbench::Game& g, const Table& s) {
  double worst = -1e300;
  for (int i = 0; i < g.num_players(); ++i) {
    const double base = expected_utility(g, s, i);
    for (int k = 0; k < g.num_strategies(i); ++k) {
      Table dev = s;
      std::fill(dev[i].begin(), dev[i].end(), 0.0);
      dev[i][k] = 1.0;
      worst = std::max(worst, expected_utility(g, dev, i) - base);
    }
  }
  return worst;
}

inline nashbench::Profile random_profile(const nashbench::Game& g, std::uint64_t seed) {
  nashbench::SplitMix64 rng(seed);
  std::vector<nashbench::MixedStrategy> out;
  for (int c : g.strategy_counts()) {
    std::vector<double> p(static_cast<std::size_t>(c));
    double total = 0.0;
    for (double& x : p) total += (x = rng.next_unit() + 1e-3);
    for (double& x : p) x /= total;
    out.emplace_back(std::move(p));
  }
  return nashbench::Profile(std::move(out));
}

// Random game with independently drawn strategy counts; each player's tensor
// is uniform in [lo, lo + scale).
inline nashbench::Game random_shaped_game(std::uint64_t seed, int max_players, std::size_t max_profiles,
                                          double lo = 0.0, double scale = 1.0) {
  nashbench::SplitMix64 rng(seed);
  const int n = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_players));
  std::vector<int> counts;
  std::size_t profiles = 1;
  for (int j = 0; j < n; ++j) {
    int c = 1 + static_cast<int>(rng.next() % 4);
    while (c > 1 && profiles * static_cast<std::size_t>(c) > max_profiles) --c;
    counts.push_back(c);
    profiles *= static_cast<std::size_t>(c);
  }
  std::vector<std::vector<double>> payoffs(static_cast<std::size_t>(n), std::vector<double>(profiles));
  for (auto& t : payoffs) {
    for (double& u : t) u = lo + scale * rng.next_unit();
  }
  return nashbench::Game(std::move(counts), std::move(payoffs));
}

}  // namespace oracle
