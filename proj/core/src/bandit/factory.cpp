#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "crank/bandit/policies.hpp"
#include "crank/core/error.hpp"

namespace crank::bandit {

namespace {

constexpr std::array<std::pair<PolicyKind, std::string_view>, 10> kKindNames{{
    {PolicyKind::Uniform, "uniform"},
    {PolicyKind::EpsilonGreedy, "epsilon_greedy"},
    {PolicyKind::Ucb1, "ucb1"},
    {PolicyKind::BetaBernoulliTs, "beta_bernoulli_ts"},
    {PolicyKind::LinGreedy, "lin_greedy"},
    {PolicyKind::LinThompson, "lin_thompson"},
    {PolicyKind::LinUcb, "lin_ucb"},
    {PolicyKind::PriorGreedy, "prior_greedy"},
    {PolicyKind::NeuralUcb, "neural_ucb"},
    {PolicyKind::Hbm, "hbm"},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view policy_kind_name(PolicyKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  fail(Errc::UnknownPolicyKind, "unknown policy kind '" + std::string(name) + "'");
}

void PolicyConfig::validate(PolicyKind kind) const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail(Errc::InvalidConfig, "epsilon must be in [0, 1]");
  if (!(ucb_alpha >= 0.0)) fail(Errc::InvalidConfig, "ucb alpha must be >= 0");
  if (!(reward_max > reward_min)) fail(Errc::InvalidConfig, "reward range is empty");
  nig.validate();
  fusion.validate();
  if (lambda_override && !(*lambda_override >= 0.0 && *lambda_override <= 1.0)) {
    fail(Errc::InvalidConfig, "pinned lambda must be in [0, 1]");
  }
  const bool needs_weights = kind == PolicyKind::PriorGreedy || warm_start;
  if (needs_weights && (!prior_weights || prior_weights->size() == 0)) {
    fail(Errc::InvalidConfig, std::string(policy_kind_name(kind)) + " needs prior weights");
  }
  if (warm_start && (kind == PolicyKind::Uniform || kind == PolicyKind::EpsilonGreedy ||
                     kind == PolicyKind::Ucb1 || kind == PolicyKind::BetaBernoulliTs ||
                     kind == PolicyKind::PriorGreedy)) {
    fail(Errc::InvalidConfig,
         std::string(policy_kind_name(kind)) + " has no posterior to warm-start");
  }
}

PolicyConfig PolicySpec::apply(PolicyConfig base) const {
  base.warm_start = warm_start;
  if (group_key) base.group_key = group_key;
  if (lambda_override) base.lambda_override = lambda_override;
  if (scope) base.scope = *scope;
  if (sampling) base.sampling = *sampling;
  return base;
}

PolicySpec parse_policy_spec(std::string_view text) {
  PolicySpec spec;
  spec.label = std::string(trim(text));
  std::string_view rest = spec.label;

  constexpr std::string_view kWarm = "+warmup";
  if (rest.size() > kWarm.size() && rest.substr(rest.size() - kWarm.size()) == kWarm) {
    spec.warm_start = true;
    rest.remove_suffix(kWarm.size());
  }

  std::string_view name = rest;
  if (const auto open = rest.find('('); open != std::string_view::npos) {
    if (rest.back() != ')') fail(Errc::InvalidConfig, "malformed policy '" + spec.label + "'");
    name = rest.substr(0, open);
    std::string_view args = rest.substr(open + 1, rest.size() - open - 2);
    while (!args.empty()) {
      const auto comma = args.find(',');
      const std::string_view item = trim(args.substr(0, comma));
      args = comma == std::string_view::npos ? std::string_view{} : args.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        fail(Errc::InvalidConfig, "policy argument without '=' in '" + spec.label + "'");
      }
      const std::string key(trim(item.substr(0, eq)));
      const std::string value(trim(item.substr(eq + 1)));
      if (key == "group") {
        spec.group_key = value;
      } else if (key == "lambda") {
        try {
          spec.lambda_override = std::stod(value);
        } catch (const std::exception&) {
          fail(Errc::InvalidConfig, "lambda is not a number in '" + spec.label + "'");
        }
      } else if (key == "scope") {
        if (value == "global") {
          spec.scope = PosteriorScope::Global;
        } else if (value == "product") {
          spec.scope = PosteriorScope::Product;
        } else if (value == "arm") {
          spec.scope = PosteriorScope::Arm;
        } else {
          fail(Errc::InvalidConfig, "scope must be global, product or arm in '" + spec.label + "'");
        }
      } else if (key == "sampling") {
        if (value == "decision") {
          spec.sampling = SamplingMode::PerDecision;
        } else if (value == "candidate") {
          spec.sampling = SamplingMode::PerCandidate;
        } else {
          fail(Errc::InvalidConfig, "sampling must be decision or candidate in '" + spec.label + "'");
        }
      } else {
        fail(Errc::InvalidConfig, "unknown policy argument '" + key + "'");
      }
    }
  }
  spec.kind = parse_policy_kind(trim(name));
  return spec;
}

}  // namespace crank::bandit
