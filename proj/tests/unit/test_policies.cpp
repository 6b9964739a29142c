#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <functional>

#include <Eigen/Cholesky>

#include "bandit_env.hpp"
#include "crank/bandit/policies.hpp"
#include "crank/core/error.hpp"

namespace crank::bandit {
namespace {

using testing::make_linear_env;
using testing::run_policy;
using testing::slot;

constexpr std::array kAllKinds{
    PolicyKind::Uniform,    PolicyKind::EpsilonGreedy, PolicyKind::Ucb1,
    PolicyKind::BetaBernoulliTs, PolicyKind::LinGreedy, PolicyKind::LinThompson,
    PolicyKind::LinUcb,     PolicyKind::PriorGreedy,   PolicyKind::NeuralUcb,
    PolicyKind::Hbm,
};

PolicyConfig with_weights(Eigen::Index d) {
  PolicyConfig cfg;
  cfg.prior_weights = FeatureVector::Ones(d);
  return cfg;
}

Errc error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::IoError;
}

TEST(PolicyKind, NamesRoundTrip) {
  for (auto k : kAllKinds) {
    EXPECT_EQ(parse_policy_kind(policy_kind_name(k)), k);
    EXPECT_EQ(make_policy(k, with_weights(2))->kind(), policy_kind_name(k));
  }
  EXPECT_EQ(error_code([] { parse_policy_kind("softmax"); }), Errc::UnknownPolicyKind);
}

TEST(ArgmaxFirst, FirstIndexWinsTies) {
  const std::vector<double> s{1.0, 3.0, 3.0, 2.0};
  EXPECT_EQ(argmax_first(s), 1u);
  const std::vector<double> flat{0.5, 0.5};
  EXPECT_EQ(argmax_first(flat), 0u);
}

TEST(Policies, RejectEmptyCandidatesAndUnknownArms) {
  core::SeededRng envrng(1);
  const auto env = make_linear_env(FeatureVector::Constant(2, 0.1), 2, 2, 1.0, envrng);
  for (auto k : kAllKinds) {
    auto p = make_policy(k, with_weights(2));
    core::SeededRng rng(0);
    const ProductView empty{ProductId{9}, 0, {}};
    EXPECT_EQ(error_code([&] { p->choose(empty, rng); }), Errc::EmptyCandidateSet)
        << policy_kind_name(k);
    const CreativeId foreign = env.candidates[1][0].id;
    EXPECT_EQ(error_code([&] { p->observe(env.view(0), foreign, env.features[1][0], 1.0); }),
              Errc::UnknownArm)
        << policy_kind_name(k);
  }
}

TEST(Policies, DeterministicUnderSeed) {
  core::SeededRng envrng(2);
  const auto env = make_linear_env(FeatureVector::Constant(3, 0.1), 4, 3, 1.0, envrng);
  for (auto k : kAllKinds) {
    auto a = make_policy(k, with_weights(3));
    auto b = make_policy(k, with_weights(3));
    EXPECT_EQ(run_policy(*a, env, 300, 11).choices, run_policy(*b, env, 300, 11).choices)
        << policy_kind_name(k);
  }
}

TEST(Policies, SeparabilityFlags) {
  EXPECT_TRUE(make_policy(PolicyKind::Uniform, {})->separable());
  EXPECT_TRUE(make_policy(PolicyKind::BetaBernoulliTs, {})->separable());
  EXPECT_FALSE(make_policy(PolicyKind::LinThompson, {})->separable());
  EXPECT_FALSE(make_policy(PolicyKind::LinUcb, {})->separable());
  EXPECT_TRUE(make_policy(PolicyKind::Hbm, {})->separable());
  PolicyConfig product;
  product.scope = PosteriorScope::Product;
  EXPECT_TRUE(make_policy(PolicyKind::LinThompson, product)->separable());
}

TEST(UniformPolicy, ChoicesAreUniform) {
  core::SeededRng envrng(3);
  const auto env = make_linear_env(FeatureVector::Constant(2, 0.1), 1, 4, 1.0, envrng);
  auto p = make_policy(PolicyKind::Uniform, {});
  core::SeededRng rng(4);
  std::array<double, 4> counts{};
  const int n = 40000;
  for (int i = 0; i < n; ++i) counts[slot(env, 0, p->choose(env.view(0), rng))] += 1.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
  EXPECT_LT(chi2, 16.27);  // χ²₃ upper 0.001 quantile
}

TEST(EpsilonGreedy, TriesEveryArmThenExploits) {
  core::SeededRng envrng(5);
  const auto env = make_linear_env(FeatureVector::Constant(2, 0.1), 1, 3, 1.0, envrng);
  PolicyConfig cfg;
  cfg.epsilon = 0.0;
  auto p = make_policy(PolicyKind::EpsilonGreedy, cfg);
  core::SeededRng rng(6);
  const auto v = env.view(0);
  const std::array<double, 3> rewards{0.2, 0.9, 0.5};
  for (std::size_t m = 0; m < 3; ++m) {
    const CreativeId c = p->choose(v, rng);
    EXPECT_EQ(c, env.candidates[0][m].id);
    p->observe(v, c, env.features[0][m], rewards[m]);
  }
  for (int i = 0; i < 10; ++i) EXPECT_EQ(p->choose(v, rng), env.candidates[0][1].id);
}

TEST(Ucb1, ExploresUntriedThenUsesBonus) {
  core::SeededRng envrng(7);
  const auto env = make_linear_env(FeatureVector::Constant(2, 0.1), 1, 2, 1.0, envrng);
  auto p = make_policy(PolicyKind::Ucb1, {});
  core::SeededRng rng(0);
  const auto v = env.view(0);
  const auto a = env.candidates[0][0].id, b = env.candidates[0][1].id;
  EXPECT_EQ(p->choose(v, rng), a);
  p->observe(v, a, env.features[0][0], 1.0);
  EXPECT_EQ(p->choose(v, rng), b);
  p->observe(v, b, env.features[0][1], 0.0);
  for (int i = 0; i < 20; ++i) p->observe(v, a, env.features[0][0], 0.6);
  // a: mean ≈ 0.62 with 21 pulls; b: mean 0 with 1 pull and bonus √(2 ln 22) ≈ 2.49.
  EXPECT_EQ(p->choose(v, rng), b);
}

TEST(BetaBernoulliTs, ConcentratesOnBestArm) {
  core::SeededRng envrng(8);
  auto env = make_linear_env(FeatureVector::Constant(1, 1.0), 1, 2, 1.0, envrng);
  env.ctr[0] = {0.1, 0.3};
  auto p = make_policy(PolicyKind::BetaBernoulliTs, {});
  const auto trace = run_policy(*p, env, 3000, 9);
  int best = 0;
  for (std::size_t i = 2000; i < 3000; ++i) best += trace.choices[i] == env.candidates[0][1].id;
  EXPECT_GT(best, 900);
}

TEST(BetaBernoulliTs, FractionalRewardsMapOntoRange) {
  core::SeededRng envrng(9);
  const auto env = make_linear_env(FeatureVector::Constant(1, 1.0), 1, 2, 1.0, envrng);
  PolicyConfig cfg;
  cfg.reward_min = -35.0;
  cfg.reward_max = 5.0;
  auto p = make_policy(PolicyKind::BetaBernoulliTs, cfg);
  const auto v = env.view(0);
  for (int i = 0; i < 200; ++i) {
    p->observe(v, env.candidates[0][0].id, env.features[0][0], -35.0);
    p->observe(v, env.candidates[0][1].id, env.features[0][1], 5.0);
  }
  core::SeededRng rng(10);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(p->choose(v, rng), env.candidates[0][1].id);
}

TEST(PriorGreedy, PicksLargestScoreAndChecksDimension) {
  core::SeededRng envrng(10);
  FeatureVector w(3);
  w << 0.3, -0.2, 0.5;
  const auto env = make_linear_env(w, 30, 4, 1.0, envrng);
  PolicyConfig cfg;
  cfg.prior_weights = w;
  auto p = make_policy(PolicyKind::PriorGreedy, cfg);
  core::SeededRng rng(0);
  for (std::size_t n = 0; n < 30; ++n) {
    std::vector<double> s;
    for (const auto& f : env.features[n]) s.push_back(f.dot(w));
    EXPECT_EQ(p->choose(env.view(n), rng), env.candidates[n][argmax_first(s)].id);
  }
  cfg.prior_weights = FeatureVector::Ones(2);
  auto bad = make_policy(PolicyKind::PriorGreedy, cfg);
  EXPECT_EQ(error_code([&] { bad->choose(env.view(0), rng); }), Errc::PreconditionViolated);
  EXPECT_EQ(error_code([] { make_policy(PolicyKind::PriorGreedy, {}); }), Errc::InvalidConfig);
}

TEST(LinearPolicies, LearnLinearRewardsBetterThanUniform) {
  FeatureVector w(3);
  w << 0.05, 0.4, 0.1;
  core::SeededRng envrng(12);
  const auto env = make_linear_env(w, 50, 4, 1.0, envrng);
  auto uniform = make_policy(PolicyKind::Uniform, {});
  const double base = run_policy(*uniform, env, 4000, 13).expected_reward;
  for (auto k : {PolicyKind::LinGreedy, PolicyKind::LinThompson, PolicyKind::LinUcb,
                 PolicyKind::NeuralUcb}) {
    auto p = make_policy(k, {});
    EXPECT_GT(run_policy(*p, env, 4000, 13).expected_reward, 1.1 * base) << policy_kind_name(k);
  }
}

TEST(LinearThompson, ScopeSelectsPosterior) {
  core::SeededRng envrng(14);
  const auto env = make_linear_env(FeatureVector::Constant(2, 0.1), 2, 2, 1.0, envrng);
  for (auto scope : {PosteriorScope::Global, PosteriorScope::Product, PosteriorScope::Arm}) {
    PolicyConfig cfg;
    cfg.scope = scope;
    LinearThompsonPolicy p(cfg);
    p.observe(env.view(0), env.candidates[0][0].id, env.features[0][0], 1.0);
    const auto* same_arm = p.posterior(env.view(0), env.candidates[0][0].id);
    const auto* other_arm = p.posterior(env.view(0), env.candidates[0][1].id);
    const auto* other_product = p.posterior(env.view(1), env.candidates[1][0].id);
    ASSERT_NE(same_arm, nullptr);
    EXPECT_EQ(other_arm == same_arm, scope != PosteriorScope::Arm);
    EXPECT_EQ(other_product == same_arm, scope == PosteriorScope::Global);
  }
}

TEST(LinearThompson, WarmStartSetsPriorMean) {
  core::SeededRng envrng(15);
  const auto env = make_linear_env(FeatureVector::Constant(2, 0.1), 1, 2, 1.0, envrng);
  PolicyConfig cfg;
  cfg.prior_weights = FeatureVector::Constant(2, 3.0);
  cfg.warm_start = true;
  LinearThompsonPolicy p(cfg);
  const FeatureVector& f = env.features[0][0];
  p.observe(env.view(0), env.candidates[0][0].id, f, 0.0);
  // μ = (Σ₀ + ffᵀ)⁻¹ Σ₀μ₀ for one zero reward.
  const Matrix precision = 0.25 * Matrix::Identity(2, 2) + f * f.transpose();
  const FeatureVector expected = precision.ldlt().solve(0.25 * FeatureVector::Constant(2, 3.0));
  EXPECT_LT((p.posterior(env.view(0), env.candidates[0][0].id)->mu() - expected).norm(), 1e-12);
}

TEST(PolicyConfig, Validation) {
  PolicyConfig cfg;
  cfg.epsilon = 1.5;
  EXPECT_EQ(error_code([&] { cfg.validate(PolicyKind::EpsilonGreedy); }), Errc::InvalidConfig);
  cfg = {};
  cfg.lambda_override = 1.2;
  EXPECT_EQ(error_code([&] { cfg.validate(PolicyKind::Hbm); }), Errc::InvalidConfig);
  cfg = {};
  cfg.reward_min = cfg.reward_max = 1.0;
  EXPECT_EQ(error_code([&] { cfg.validate(PolicyKind::BetaBernoulliTs); }), Errc::InvalidConfig);
  cfg = with_weights(2);
  cfg.warm_start = true;
  EXPECT_EQ(error_code([&] { cfg.validate(PolicyKind::Ucb1); }), Errc::InvalidConfig);
  EXPECT_NO_THROW(cfg.validate(PolicyKind::LinUcb));
  cfg = {};
  cfg.nig.eta = 0.5;
  EXPECT_EQ(error_code([&] { cfg.validate(PolicyKind::LinThompson); }),
            Errc::InvalidHyperparameter);
}

TEST(PolicySpec, ParsesModifiers) {
  auto s = parse_policy_spec("hbm+warmup");
  EXPECT_EQ(s.kind, PolicyKind::Hbm);
  EXPECT_TRUE(s.warm_start);
  EXPECT_EQ(s.label, "hbm+warmup");

  s = parse_policy_spec(" hbm(group=bruises) ");
  EXPECT_EQ(s.label, "hbm(group=bruises)");
  EXPECT_EQ(s.group_key, "bruises");
  EXPECT_FALSE(s.warm_start);

  s = parse_policy_spec("hbm(lambda=0)");
  EXPECT_EQ(s.lambda_override, 0.0);

  s = parse_policy_spec("lin_thompson(scope=product, sampling=candidate)+warmup");
  EXPECT_EQ(s.kind, PolicyKind::LinThompson);
  EXPECT_EQ(s.scope, PosteriorScope::Product);
  EXPECT_EQ(s.sampling, SamplingMode::PerCandidate);
  EXPECT_TRUE(s.warm_start);

  PolicyConfig base;
  base.epsilon = 0.2;
  const auto applied = s.apply(base);
  EXPECT_EQ(applied.scope, PosteriorScope::Product);
  EXPECT_TRUE(applied.warm_start);
  EXPECT_EQ(applied.epsilon, 0.2);
}

TEST(PolicySpec, RejectsMalformedText) {
  EXPECT_EQ(error_code([] { parse_policy_spec("hbm(group=x"); }), Errc::InvalidConfig);
  EXPECT_EQ(error_code([] { parse_policy_spec("hbm(lambda)"); }), Errc::InvalidConfig);
  EXPECT_EQ(error_code([] { parse_policy_spec("hbm(lambda=x)"); }), Errc::InvalidConfig);
  EXPECT_EQ(error_code([] { parse_policy_spec("hbm(colour=red)"); }), Errc::InvalidConfig);
  EXPECT_EQ(error_code([] { parse_policy_spec("lin_thompson(scope=world)"); }),
            Errc::InvalidConfig);
  EXPECT_EQ(error_code([] { parse_policy_spec("greedy"); }), Errc::UnknownPolicyKind);
}

}  // namespace
}  // namespace crank::bandit
