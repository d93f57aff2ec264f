#pragma once

// Seeded generators for uniform-random and two-player constant-sum games, and
// a few small closed-form fixtures.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nashbench/game.hpp"

namespace nashbench {

/// splitmix64. Outputs map to [0, 1) through their top 53 bits.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed of game `index` in a batch: output `index` (0-based) of the
/// splitmix64 stream seeded with `master_seed`.
inline std::uint64_t batch_seed(std::uint64_t master_seed, std::uint64_t index) {
  return SplitMix64::mix(master_seed + (index + 1) * SplitMix64::kGamma);
}

enum class GameKind { UniformRandom, ConstantSum2P };

struct GenSpec {
  int num_players = 2;
  int actions_per_player = 2;
  GameKind kind = GameKind::UniformRandom;
  std::uint64_t seed = 0;
};

inline void validate(const GenSpec& spec) {
  if (spec.num_players < 2) throw std::invalid_argument("need at least 2 players");
  if (spec.actions_per_player < 2) throw std::invalid_argument("need at least 2 actions");
  if (spec.kind == GameKind::ConstantSum2P && spec.num_players != 2) {
    throw std::invalid_argument("constant-sum games require exactly 2 players");
  }
}

namespace detail {

inline std::size_t checked_profiles(const GenSpec& spec) {
  std::size_t profiles = 1;
  for (int j = 0; j < spec.num_players; ++j) {
    if (profiles > (std::size_t{1} << 40) / static_cast<std::size_t>(spec.actions_per_player)) {
      throw std::invalid_argument("game too large");
    }
    profiles *= static_cast<std::size_t>(spec.actions_per_player);
  }
  return profiles;
}

}  // namespace detail

/// Every payoff of every player drawn from U[0,1), player 0's tensor first.
inline Game random_game(const GenSpec& spec) {
  validate(spec);
  if (spec.kind != GameKind::UniformRandom) {
    throw std::invalid_argument("random_game expects a uniform-random spec");
  }
  const std::size_t profiles = detail::checked_profiles(spec);
  SplitMix64 rng(spec.seed);
  std::vector<std::vector<double>> payoffs(static_cast<std::size_t>(spec.num_players));
  for (auto& t : payoffs) {
    t.resize(profiles);
    for (double& u : t) u = rng.next_unit();
  }
  std::vector<int> counts(payoffs.size(), spec.actions_per_player);
  return Game(std::move(counts), std::move(payoffs));
}

/// Player 0's payoffs from U[0,1); player 1 receives the complement.
inline Game random_constant_sum(const GenSpec& spec) {
  validate(spec);
  if (spec.kind != GameKind::ConstantSum2P) {
    throw std::invalid_argument("random_constant_sum expects a constant-sum spec");
  }
  const std::size_t profiles = detail::checked_profiles(spec);
  SplitMix64 rng(spec.seed);
  std::vector<double> u1(profiles);
  std::vector<double> u2(profiles);
  for (std::size_t k = 0; k < profiles; ++k) {
    u1[k] = rng.next_unit();
    u2[k] = 1.0 - u1[k];
  }
  return Game({spec.actions_per_player, spec.actions_per_player}, {std::move(u1), std::move(u2)});
}

inline Game generate(const GenSpec& spec) {
  return spec.kind == GameKind::ConstantSum2P ? random_constant_sum(spec) : random_game(spec);
}

enum class NamedGame { MatchingPennies01, RockPaperScissors01, Dominant2x2 };

inline Game named_game(NamedGame name) {
  switch (name) {
    case NamedGame::MatchingPennies01:
      return Game({2, 2}, {{1, 0, 0, 1}, {0, 1, 1, 0}});
    case NamedGame::RockPaperScissors01: {
      // Action order rock, paper, scissors; outcome[a][b] is a's result vs b.
      constexpr double outcome[3][3] = {{0.5, 0.0, 1.0}, {1.0, 0.5, 0.0}, {0.0, 1.0, 0.5}};
      std::vector<double> u1(9);
      std::vector<double> u2(9);
      for (int b = 0; b < 3; ++b) {
        for (int a = 0; a < 3; ++a) {
          u1[static_cast<std::size_t>(a + 3 * b)] = outcome[a][b];
          u2[static_cast<std::size_t>(a + 3 * b)] = 1.0 - outcome[a][b];
        }
      }
      return Game({3, 3}, {std::move(u1), std::move(u2)});
    }
    case NamedGame::Dominant2x2:
      // u_i = 0.5 * [own action is 1] + 0.25 * [other action is 1].
      return Game({2, 2}, {{0.0, 0.5, 0.25, 0.75}, {0.0, 0.25, 0.5, 0.75}});
  }
  throw std::invalid_argument("unknown named game");
}

inline NamedGame parse_named_game(std::string_view name) {
  if (name == "MATCHING_PENNIES_01") return NamedGame::MatchingPennies01;
  if (name == "RPS_01") return NamedGame::RockPaperScissors01;
  if (name == "DOMINANT_2x2") return NamedGame::Dominant2x2;
  throw std::invalid_argument("unknown named game: " + std::string(name));
}

}  // namespace nashbench
