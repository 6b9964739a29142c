#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crank/bandit/hybrid.hpp"
#include "crank/bandit/nig.hpp"
#include "crank/bandit/policy.hpp"

namespace crank::bandit {

enum class PolicyKind {
  Uniform,
  EpsilonGreedy,
  Ucb1,
  BetaBernoulliTs,
  LinGreedy,
  LinThompson,
  LinUcb,
  PriorGreedy,
  NeuralUcb,
  Hbm,
};

std::string_view policy_kind_name(PolicyKind kind) noexcept;
/// Throws Errc::UnknownPolicyKind.
PolicyKind parse_policy_kind(std::string_view name);

/// Which observations a linear posterior pools.
enum class PosteriorScope {
  Global,   // one posterior for everything
  Product,  // one per product (or per group when a group key is set)
  Arm,      // one per creative
};

enum class SamplingMode {
  PerDecision,   // one weight draw scores every candidate
  PerCandidate,  // a fresh draw for each candidate
};

struct PolicyConfig {
  double epsilon = 0.05;
  /// Exploration multiplier for lin_ucb and neural_ucb.
  double ucb_alpha = 1.0;
  /// Reward range used to map rewards onto Beta pseudo-counts.
  double reward_min = 0.0;
  double reward_max = 1.0;

  NigPriorConfig nig;
  FusionConfig fusion;
  /// Pins the fusion weight instead of the sigmoid gate.
  std::optional<double> lambda_override;
  std::optional<std::string> group_key;

  PosteriorScope scope = PosteriorScope::Global;
  SamplingMode sampling = SamplingMode::PerDecision;

  /// Scorer head weights: the fixed scorer of prior_greedy, and the prior
  /// mean of every NIG posterior when warm_start is set.
  std::optional<FeatureVector> prior_weights;
  bool warm_start = false;

  void validate(PolicyKind kind) const;
};

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyConfig& config);

/// Linear Thompson sampling on a Normal–Inverse-Gamma posterior.
class LinearThompsonPolicy final : public Policy {
 public:
  explicit LinearThompsonPolicy(const PolicyConfig& config);

  std::string_view kind() const noexcept override { return "lin_thompson"; }
  CreativeId choose(const ProductView& product, core::SeededRng& rng) override;
  void observe(const ProductView& product, CreativeId creative, const FeatureVector& f,
               double reward) override;
  bool separable() const noexcept override { return scope_ != PosteriorScope::Global; }
  std::optional<std::string> group_key() const override { return group_key_; }

  const NigPosterior* posterior(const ProductView& product, CreativeId creative) const;

 private:
  std::uint64_t key(const ProductView& product, CreativeId creative) const;
  const NigPosterior& lookup(std::uint64_t key, Eigen::Index dim);

  NigPriorConfig nig_;
  PosteriorScope scope_;
  SamplingMode sampling_;
  std::optional<std::string> group_key_;
  std::optional<NigPrior> prior_;
  std::optional<NigPosterior> fresh_;
  std::unordered_map<std::uint64_t, NigPosterior> posteriors_;
  std::vector<double> scores_;
  FeatureVector draw_;
};

/// Hybrid bandit: a shared posterior per product (or per group) fused with
/// a creative-specific posterior through the impression-count sigmoid.
/// Only the displayed creative's specific posterior learns from a reward.
class HbmPolicy final : public Policy {
 public:
  explicit HbmPolicy(const PolicyConfig& config);

  std::string_view kind() const noexcept override { return "hbm"; }
  CreativeId choose(const ProductView& product, core::SeededRng& rng) override;
  void observe(const ProductView& product, CreativeId creative, const FeatureVector& f,
               double reward) override;
  bool separable() const noexcept override { return !group_key_.has_value(); }
  std::optional<std::string> group_key() const override { return group_key_; }

  /// nullptr until the first observation touches that posterior.
  const NigPosterior* shared_posterior(const ProductView& product) const;
  const NigPosterior* specific_posterior(const ProductView& product, CreativeId creative) const;
  std::uint64_t impressions(const ProductView& product) const;

 private:
  struct SharedState {
    NigPosterior shared;
    std::map<std::uint32_t, NigPosterior> specific;
    std::uint64_t impressions = 0;
  };

  std::uint32_t shared_key(const ProductView& product) const;
  void ensure_prior(Eigen::Index dim);

  NigPriorConfig nig_;
  FusionConfig fusion_;
  std::optional<double> lambda_override_;
  std::optional<std::string> group_key_;
  std::optional<NigPrior> prior_;
  std::optional<NigPosterior> fresh_;
  std::unordered_map<std::uint32_t, SharedState> states_;
  std::vector<double> scores_;
  FeatureVector draw_;
};

}  // namespace crank::bandit

namespace crank::bandit {

/// A policy as written on the command line, e.g. "lin_thompson",
/// "hbm+warmup", "hbm(group=bruises)", "hbm(lambda=0)" or
/// "lin_thompson(scope=product,sampling=candidate)".
struct PolicySpec {
  std::string label;
  PolicyKind kind = PolicyKind::Uniform;
  bool warm_start = false;
  std::optional<std::string> group_key;
  std::optional<double> lambda_override;
  std::optional<PosteriorScope> scope;
  std::optional<SamplingMode> sampling;

  /// `base` with this spec's overrides applied.
  PolicyConfig apply(PolicyConfig base) const;
};

/// Throws Errc::UnknownPolicyKind or Errc::InvalidConfig.
PolicySpec parse_policy_spec(std::string_view text);

}  // namespace crank::bandit
