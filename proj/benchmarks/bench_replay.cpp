#include <benchmark/benchmark.h>

#include "crank/bandit/policies.hpp"
#include "crank/data/generator.hpp"
#include "crank/replay/replay.hpp"

namespace {

using namespace crank;

const data::Dataset& dataset() {
  static const data::Dataset d = [] {
    data::GeneratorConfig cfg;
    cfg.products = 2000;
    const auto g = data::generate(cfg);
    return data::Dataset::build(g.log, g.features);
  }();
  return d;
}

// Logged impressions replayed per second.
void BM_Replay(benchmark::State& state, bandit::PolicyKind kind) {
  const auto& d = dataset();
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto r = replay::replay([&] { return bandit::make_policy(kind, {}); }, d,
                                  {.seed = seed++, .record_shares = false});
    benchmark::DoNotOptimize(r.matched_clicks);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.impression_count()));
}
BENCHMARK_CAPTURE(BM_Replay, uniform, bandit::PolicyKind::Uniform)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Replay, lin_thompson, bandit::PolicyKind::LinThompson)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Replay, hbm, bandit::PolicyKind::Hbm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
