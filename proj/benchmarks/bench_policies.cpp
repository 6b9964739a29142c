#include <benchmark/benchmark.h>

#include <vector>

#include "crank/bandit/policies.hpp"

namespace {

using namespace crank;

// choose + observe on one product with `range(0)` candidates of dimension 8.
void BM_ChooseObserve(benchmark::State& state, bandit::PolicyKind kind) {
  const auto m = static_cast<std::size_t>(state.range(0));
  core::SeededRng rng(4);
  std::vector<FeatureVector> features;
  for (std::size_t i = 0; i < m; ++i) {
    FeatureVector f(8);
    for (Eigen::Index j = 0; j < 8; ++j) f(j) = rng.normal();
    features.push_back(f);
  }
  std::vector<bandit::Candidate> cands;
  for (std::size_t i = 0; i < m; ++i) cands.push_back({CreativeId{static_cast<std::uint32_t>(i)}, &features[i]});
  const bandit::ProductView view{ProductId{0}, 0, cands};
  auto policy = bandit::make_policy(kind, {});
  for (auto _ : state) {
    const CreativeId c = policy->choose(view, rng);
    policy->observe(view, c, features[c.value], rng.bernoulli(0.05) ? 1.0 : 0.0);
  }
}
BENCHMARK_CAPTURE(BM_ChooseObserve, beta_bernoulli_ts, bandit::PolicyKind::BetaBernoulliTs)->Arg(4);
BENCHMARK_CAPTURE(BM_ChooseObserve, lin_thompson, bandit::PolicyKind::LinThompson)->Arg(4);
BENCHMARK_CAPTURE(BM_ChooseObserve, lin_ucb, bandit::PolicyKind::LinUcb)->Arg(4);
BENCHMARK_CAPTURE(BM_ChooseObserve, hbm, bandit::PolicyKind::Hbm)->Arg(4)->Arg(11);

}  // namespace
