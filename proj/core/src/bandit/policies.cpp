#include "crank/bandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crank/core/error.hpp"

namespace crank::bandit {

std::size_t argmax_first(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

namespace {

void require_candidates(const ProductView& product) {
  if (product.candidates.empty()) {
    fail(Errc::EmptyCandidateSet,
         "product " + std::to_string(product.product.value) + " has no candidates");
  }
}

void require_member(const ProductView& product, CreativeId creative) {
  for (const auto& c : product.candidates) {
    if (c.id == creative) return;
  }
  fail(Errc::UnknownArm, "creative " + std::to_string(creative.value) +
                             " is not a candidate of product " +
                             std::to_string(product.product.value));
}

std::uint64_t arm_key(const ProductView& product, CreativeId creative) {
  return (static_cast<std::uint64_t>(product.product.value) << 32) | creative.value;
}

class UniformPolicy final : public Policy {
 public:
  std::string_view kind() const noexcept override { return "uniform"; }
  CreativeId choose(const ProductView& product, core::SeededRng& rng) override {
    require_candidates(product);
    return product.candidates[rng.index(product.candidates.size())].id;
  }
  void observe(const ProductView& product, CreativeId creative, const FeatureVector&,
               double) override {
    require_member(product, creative);
  }
  bool separable() const noexcept override { return true; }
};

struct ArmStats {
  double pulls = 0.0;
  double reward_sum = 0.0;
  double mean() const { return reward_sum / pulls; }
};

class ContextFreePolicy : public Policy {
 public:
  void observe(const ProductView& product, CreativeId creative, const FeatureVector&,
               double reward) override {
    require_member(product, creative);
    auto& s = stats_[arm_key(product, creative)];
    s.pulls += 1.0;
    s.reward_sum += reward;
  }
  bool separable() const noexcept override { return true; }

 protected:
  const ArmStats& stats(const ProductView& product, CreativeId creative) const {
    static const ArmStats kEmpty;
    auto it = stats_.find(arm_key(product, creative));
    return it == stats_.end() ? kEmpty : it->second;
  }

  // Lowest-index candidate that has never been played, if any.
  std::optional<CreativeId> untried(const ProductView& product) const {
    for (const auto& c : product.candidates) {
      if (stats(product, c.id).pulls == 0.0) return c.id;
    }
    return std::nullopt;
  }

  std::vector<double> scores_;

 private:
  std::unordered_map<std::uint64_t, ArmStats> stats_;
};

class EpsilonGreedyPolicy final : public ContextFreePolicy {
 public:
  explicit EpsilonGreedyPolicy(double epsilon) : epsilon_(epsilon) {}
  std::string_view kind() const noexcept override { return "epsilon_greedy"; }
  CreativeId choose(const ProductView& product, core::SeededRng& rng) override {
    require_candidates(product);
    if (rng.uniform() < epsilon_) {
      return product.candidates[rng.index(product.candidates.size())].id;
    }
    if (auto id = untried(product)) return *id;
    scores_.clear();
    for (const auto& c : product.candidates) scores_.push_back(stats(product, c.id).mean());
    return product.candidates[argmax_first(scores_)].id;
  }

 private:
  double epsilon_;
};

class Ucb1Policy final : public ContextFreePolicy {
 public:
  std::string_view kind() const noexcept override { return "ucb1"; }
  CreativeId choose(const ProductView& product, core::SeededRng&) override {
    require_candidates(product);
    if (auto id = untried(product)) return *id;
    double total = 0.0;
    for (const auto& c : product.candidates) total += stats(product, c.id).pulls;
    const double log_total = std::log(total);
    scores_.clear();
    for (const auto& c : product.candidates) {
      const auto& s = stats(product, c.id);
      scores_.push_back(s.mean() + std::sqrt(2.0 * log_total / s.pulls));
    }
    return product.candidates[argmax_first(scores_)].id;
  }
};

// Beta(1 + successes, 1 + failures) per creative. Rewards in
// [reward_min, reward_max] count as fractional successes.
class BetaBernoulliPolicy final : public ContextFreePolicy {
 public:
  BetaBernoulliPolicy(double reward_min, double reward_max)
      : reward_min_(reward_min), reward_span_(reward_max - reward_min) {}
  std::string_view kind() const noexcept override { return "beta_bernoulli_ts"; }
  CreativeId choose(const ProductView& product, core::SeededRng& rng) override {
    require_candidates(product);
    scores_.clear();
    for (const auto& c : product.candidates) {
      const auto& s = stats(product, c.id);
      const double successes = (s.reward_sum - reward_min_ * s.pulls) / reward_span_;
      const double x = rng.gamma(1.0 + successes);
      const double y = rng.gamma(1.0 + s.pulls - successes);
      scores_.push_back(x / (x + y));
    }
    return product.candidates[argmax_first(scores_)].id;
  }
  void observe(const ProductView& product, CreativeId creative, const FeatureVector& f,
               double reward) override {
    ContextFreePolicy::observe(product, creative, f,
                               std::clamp(reward, reward_min_, reward_min_ + reward_span_));
  }

 private:
  double reward_min_;
  double reward_span_;
};

class PriorGreedyPolicy final : public Policy {
 public:
  explicit PriorGreedyPolicy(FeatureVector weights) : weights_(std::move(weights)) {}
  std::string_view kind() const noexcept override { return "prior_greedy"; }
  CreativeId choose(const ProductView& product, core::SeededRng&) override {
    require_candidates(product);
    scores_.clear();
    for (const auto& c : product.candidates) {
      if (c.features->size() != weights_.size()) {
        fail(Errc::PreconditionViolated, "prior_greedy: weight dimension does not match features");
      }
      scores_.push_back(c.features->dot(weights_));
    }
    return product.candidates[argmax_first(scores_)].id;
  }
  void observe(const ProductView& product, CreativeId creative, const FeatureVector&,
               double) override {
    require_member(product, creative);
  }
  bool separable() const noexcept override { return true; }

 private:
  FeatureVector weights_;
  std::vector<double> scores_;
};

// Shared global NIG posterior scored by its mean, an upper confidence bound,
// or ε-greedy on the mean.
class LinearPointPolicy final : public Policy {
 public:
  enum class Rule { Greedy, Ucb, NoiseScaledUcb };

  LinearPointPolicy(Rule rule, const PolicyConfig& config)
      : rule_(rule), nig_(config.nig), epsilon_(config.epsilon), alpha_(config.ucb_alpha) {
    if (config.warm_start) nig_.mu0 = *config.prior_weights;
  }

  std::string_view kind() const noexcept override {
    switch (rule_) {
      case Rule::Greedy: return "lin_greedy";
      case Rule::Ucb: return "lin_ucb";
      case Rule::NoiseScaledUcb: return "neural_ucb";
    }
    return "";
  }

  CreativeId choose(const ProductView& product, core::SeededRng& rng) override {
    require_candidates(product);
    ensure(product.candidates.front().features->size());
    if (rule_ == Rule::Greedy && rng.uniform() < epsilon_) {
      return product.candidates[rng.index(product.candidates.size())].id;
    }
    const NigPosterior& post = *posterior_;
    const double noise = rule_ == Rule::NoiseScaledUcb && post.a() > 1.0
                             ? post.b() / (post.a() - 1.0)
                             : 1.0;
    scores_.clear();
    for (const auto& c : product.candidates) {
      double s = c.features->dot(post.mu());
      if (rule_ != Rule::Greedy) {
        scratch_ = post.factor().lower().triangularView<Eigen::Lower>().solve(*c.features);
        s += alpha_ * std::sqrt(noise * scratch_.squaredNorm());
      }
      scores_.push_back(s);
    }
    return product.candidates[argmax_first(scores_)].id;
  }

  void observe(const ProductView& product, CreativeId creative, const FeatureVector& f,
               double reward) override {
    require_member(product, creative);
    ensure(f.size());
    posterior_->observe(f, reward);
  }

  bool separable() const noexcept override { return false; }

 private:
  void ensure(Eigen::Index dim) {
    if (!posterior_) posterior_.emplace(NigPrior(nig_, dim));
  }

  Rule rule_;
  NigPriorConfig nig_;
  double epsilon_;
  double alpha_;
  std::optional<NigPosterior> posterior_;
  std::vector<double> scores_;
  FeatureVector scratch_;
};

}  // namespace

LinearThompsonPolicy::LinearThompsonPolicy(const PolicyConfig& config)
    : nig_(config.nig),
      scope_(config.scope),
      sampling_(config.sampling),
      group_key_(config.group_key) {
  if (config.warm_start) nig_.mu0 = *config.prior_weights;
}

std::uint64_t LinearThompsonPolicy::key(const ProductView& product, CreativeId creative) const {
  const std::uint64_t shared = group_key_ ? product.group : product.product.value;
  switch (scope_) {
    case PosteriorScope::Global: return 0;
    case PosteriorScope::Product: return shared;
    case PosteriorScope::Arm: return (shared << 32) | creative.value;
  }
  return 0;
}

const NigPosterior& LinearThompsonPolicy::lookup(std::uint64_t k, Eigen::Index dim) {
  if (!prior_) {
    prior_.emplace(nig_, dim);
    fresh_.emplace(*prior_);
  }
  auto it = posteriors_.find(k);
  return it == posteriors_.end() ? *fresh_ : it->second;
}

const NigPosterior* LinearThompsonPolicy::posterior(const ProductView& product,
                                                    CreativeId creative) const {
  auto it = posteriors_.find(key(product, creative));
  return it == posteriors_.end() ? nullptr : &it->second;
}

CreativeId LinearThompsonPolicy::choose(const ProductView& product, core::SeededRng& rng) {
  require_candidates(product);
  const auto& cands = product.candidates;
  const Eigen::Index dim = cands.front().features->size();
  scores_.clear();
  if (sampling_ == SamplingMode::PerDecision && scope_ != PosteriorScope::Arm) {
    thompson_draw_into(lookup(key(product, cands.front().id), dim), rng, draw_);
    for (const auto& c : cands) scores_.push_back(c.features->dot(draw_));
  } else {
    for (const auto& c : cands) {
      thompson_draw_into(lookup(key(product, c.id), dim), rng, draw_);
      scores_.push_back(c.features->dot(draw_));
    }
  }
  return cands[argmax_first(scores_)].id;
}

void LinearThompsonPolicy::observe(const ProductView& product, CreativeId creative,
                                   const FeatureVector& f, double reward) {
  require_member(product, creative);
  lookup(0, f.size());
  const std::uint64_t k = key(product, creative);
  auto it = posteriors_.find(k);
  if (it == posteriors_.end()) it = posteriors_.emplace(k, *fresh_).first;
  it->second.observe(f, reward);
}

HbmPolicy::HbmPolicy(const PolicyConfig& config)
    : nig_(config.nig),
      fusion_(config.fusion),
      lambda_override_(config.lambda_override),
      group_key_(config.group_key) {
  if (config.warm_start) nig_.mu0 = *config.prior_weights;
}

std::uint32_t HbmPolicy::shared_key(const ProductView& product) const {
  return group_key_ ? product.group : product.product.value;
}

void HbmPolicy::ensure_prior(Eigen::Index dim) {
  if (!prior_) {
    prior_.emplace(nig_, dim);
    fresh_.emplace(*prior_);
  }
}

CreativeId HbmPolicy::choose(const ProductView& product, core::SeededRng& rng) {
  require_candidates(product);
  const auto& cands = product.candidates;
  ensure_prior(cands.front().features->size());

  const SharedState* state = nullptr;
  if (auto it = states_.find(shared_key(product)); it != states_.end()) state = &it->second;
  const std::uint64_t imps = state ? state->impressions : 0;
  const double lambda = lambda_override_ ? *lambda_override_ : fusion_lambda(imps, fusion_);
  const NigPosterior& shared = state ? state->shared : *fresh_;

  scores_.clear();
  for (const auto& c : cands) {
    const NigPosterior* specific = &*fresh_;
    if (state) {
      if (auto it = state->specific.find(c.id.value); it != state->specific.end()) {
        specific = &it->second;
      }
    }
    scores_.push_back(hybrid_score(HybridArmState{shared, *specific, imps}, *c.features, lambda,
                                   rng, draw_));
  }
  return cands[argmax_first(scores_)].id;
}

void HbmPolicy::observe(const ProductView& product, CreativeId creative, const FeatureVector& f,
                        double reward) {
  require_member(product, creative);
  ensure_prior(f.size());
  const std::uint32_t k = shared_key(product);
  auto it = states_.find(k);
  if (it == states_.end()) it = states_.emplace(k, SharedState{*fresh_, {}, 0}).first;
  SharedState& state = it->second;
  state.shared.observe(f, reward);
  auto spec = state.specific.find(creative.value);
  if (spec == state.specific.end()) spec = state.specific.emplace(creative.value, *fresh_).first;
  spec->second.observe(f, reward);
  ++state.impressions;
}

const NigPosterior* HbmPolicy::shared_posterior(const ProductView& product) const {
  auto it = states_.find(shared_key(product));
  return it == states_.end() ? nullptr : &it->second.shared;
}

const NigPosterior* HbmPolicy::specific_posterior(const ProductView& product,
                                                  CreativeId creative) const {
  auto it = states_.find(shared_key(product));
  if (it == states_.end()) return nullptr;
  auto spec = it->second.specific.find(creative.value);
  return spec == it->second.specific.end() ? nullptr : &spec->second;
}

std::uint64_t HbmPolicy::impressions(const ProductView& product) const {
  auto it = states_.find(shared_key(product));
  return it == states_.end() ? 0 : it->second.impressions;
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyConfig& config) {
  config.validate(kind);
  switch (kind) {
    case PolicyKind::Uniform:
      return std::make_unique<UniformPolicy>();
    case PolicyKind::EpsilonGreedy:
      return std::make_unique<EpsilonGreedyPolicy>(config.epsilon);
    case PolicyKind::Ucb1:
      return std::make_unique<Ucb1Policy>();
    case PolicyKind::BetaBernoulliTs:
      return std::make_unique<BetaBernoulliPolicy>(config.reward_min, config.reward_max);
    case PolicyKind::LinGreedy:
      return std::make_unique<LinearPointPolicy>(LinearPointPolicy::Rule::Greedy, config);
    case PolicyKind::LinThompson:
      return std::make_unique<LinearThompsonPolicy>(config);
    case PolicyKind::LinUcb:
      return std::make_unique<LinearPointPolicy>(LinearPointPolicy::Rule::Ucb, config);
    case PolicyKind::NeuralUcb:
      return std::make_unique<LinearPointPolicy>(LinearPointPolicy::Rule::NoiseScaledUcb, config);
    case PolicyKind::PriorGreedy:
      return std::make_unique<PriorGreedyPolicy>(*config.prior_weights);
    case PolicyKind::Hbm:
      return std::make_unique<HbmPolicy>(config);
  }
  fail(Errc::UnknownPolicyKind, "unknown policy kind");
}

}  // namespace crank::bandit
