#include "crank/replay/mushroom_run.hpp"

#include <array>

#include "crank/core/error.hpp"

namespace crank::replay {

MushroomTrace mushroom_run(bandit::Policy& policy, const data::MushroomData& data,
                           const MushroomOptions& options, const core::SeededRng& rng) {
  if (options.rounds == 0) fail(Errc::PreconditionViolated, "rounds must be at least 1");
  if (data.size() == 0) fail(Errc::EmptyDataset, "no mushroom records");
  if (options.trace_every == 0) fail(Errc::InvalidConfig, "trace_every must be at least 1");

  std::optional<std::size_t> group_attr;
  if (auto key = policy.group_key()) group_attr = data::MushroomData::attribute_index(*key);

  std::vector<FeatureVector> eat(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) eat[i] = data.eat_context(i);
  const FeatureVector no_eat = data.no_eat_context();

  const auto& r = options.rewards;
  const double poison_mean = r.poison_luck * r.poison_lucky + (1.0 - r.poison_luck) * r.poison_unlucky;
  core::SeededRng env = rng.derive(1);
  core::SeededRng agent = rng.derive(2);

  MushroomTrace out;
  out.policy = std::string(policy.kind());
  out.seed = rng.seed();
  for (std::size_t t = 1; t <= options.rounds; ++t) {
    const std::size_t i = env.index(data.size());
    const bool poisonous = data.records()[i].poisonous;
    // Drawn every round so all policies see the same environment sequence.
    const bool lucky = env.bernoulli(r.poison_luck);
    const std::array<bandit::Candidate, 2> arms{bandit::Candidate{kEat, &eat[i]},
                                                bandit::Candidate{kNoEat, &no_eat}};
    const bandit::ProductView view{ProductId{0}, group_attr ? data.category_of(i, *group_attr) : 0u, arms};
    const CreativeId action = policy.choose(view, agent);

    double reward = r.no_eat;
    double expected = r.no_eat;
    if (action == kEat) {
      if (poisonous) {
        reward = lucky ? r.poison_lucky : r.poison_unlucky;
        expected = poison_mean;
        ++out.poisonous_eaten;
      } else {
        reward = r.safe_eat;
        expected = r.safe_eat;
      }
    } else if (!poisonous) {
      ++out.safe_skipped;
    }
    const double best = poisonous ? std::max(r.no_eat, poison_mean) : std::max(r.no_eat, r.safe_eat);
    out.cumulative_regret += best - expected;
    out.total_reward += reward;
    policy.observe(view, action, action == kEat ? eat[i] : no_eat, reward);
    if (t % options.trace_every == 0 || t == options.rounds) {
      out.trace.push_back(RegretPoint{t, out.cumulative_regret});
    }
  }
  return out;
}

}  // namespace crank::replay
