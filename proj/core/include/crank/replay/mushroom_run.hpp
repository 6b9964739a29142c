#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crank/bandit/policy.hpp"
#include "crank/core/rng.hpp"
#include "crank/data/mushroom.hpp"

namespace crank::replay {

struct MushroomRewards {
  double safe_eat = 5.0;
  double poison_lucky = 5.0;
  double poison_unlucky = -35.0;
  double poison_luck = 0.5;
  double no_eat = 0.0;
};

struct MushroomOptions {
  std::size_t rounds = 50000;
  /// Cumulative regret is recorded every `trace_every` rounds and at the end.
  std::size_t trace_every = 500;
  MushroomRewards rewards;
};

struct RegretPoint {
  std::size_t round = 0;
  double cumulative_regret = 0.0;

  bool operator==(const RegretPoint&) const = default;
};

struct MushroomTrace {
  std::string policy;
  std::uint64_t seed = 0;
  std::vector<RegretPoint> trace;
  /// Expected-reward regret against eating exactly the safe mushrooms.
  double cumulative_regret = 0.0;
  double total_reward = 0.0;
  std::uint64_t poisonous_eaten = 0;
  std::uint64_t safe_skipped = 0;
};

inline constexpr CreativeId kEat{0};
inline constexpr CreativeId kNoEat{1};

/// Each round draws a mushroom uniformly, offers "eat" and "no-eat" as arms
/// with their own contexts, realises the reward and updates the policy.
/// Regret per round is the expected-reward gap to the oracle action, so a
/// lucky poisonous meal is not rewarded. When the policy has a group key the
/// mushroom's category of that attribute becomes the view's group code.
MushroomTrace mushroom_run(bandit::Policy& policy, const data::MushroomData& data,
                           const MushroomOptions& options, const core::SeededRng& rng);

}  // namespace crank::replay
