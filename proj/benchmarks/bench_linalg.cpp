#include <benchmark/benchmark.h>

#include "crank/bandit/nig.hpp"
#include "crank/core/linalg.hpp"
#include "crank/core/rng.hpp"

namespace {

using namespace crank;

FeatureVector random_vector(Eigen::Index d, core::SeededRng& rng) {
  FeatureVector f(d);
  for (Eigen::Index i = 0; i < d; ++i) f(i) = rng.normal();
  return f;
}

// One posterior update: rank-one Cholesky update plus the moment refresh.
void BM_NigObserve(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  core::SeededRng rng(1);
  bandit::NigPosterior p(bandit::NigPrior(bandit::NigPriorConfig{}, d));
  const FeatureVector f = random_vector(d, rng);
  for (auto _ : state) {
    p.observe(f, 1.0);
    benchmark::DoNotOptimize(p.mu().data());
  }
}
BENCHMARK(BM_NigObserve)->Arg(8)->Arg(32)->Arg(128);

// Rebuilding the factor from the precision matrix, for comparison.
void BM_NigRefactor(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  core::SeededRng rng(2);
  bandit::NigPosterior p(bandit::NigPrior(bandit::NigPriorConfig{}, d));
  for (int i = 0; i < 4 * d; ++i) p.observe(random_vector(d, rng), rng.normal());
  for (auto _ : state) {
    p.refactor();
    benchmark::DoNotOptimize(p.mu().data());
  }
}
BENCHMARK(BM_NigRefactor)->Arg(8)->Arg(32)->Arg(128);

void BM_ThompsonDraw(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  core::SeededRng rng(3);
  bandit::NigPosterior p(bandit::NigPrior(bandit::NigPriorConfig{}, d));
  for (int i = 0; i < 4 * d; ++i) p.observe(random_vector(d, rng), rng.normal());
  FeatureVector w;
  for (auto _ : state) {
    bandit::thompson_draw_into(p, rng, w);
    benchmark::DoNotOptimize(w.data());
  }
}
BENCHMARK(BM_ThompsonDraw)->Arg(8)->Arg(32)->Arg(128);

}  // namespace
