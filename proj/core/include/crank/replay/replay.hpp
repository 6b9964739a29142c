#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crank/bandit/policy.hpp"
#include "crank/data/dataset.hpp"

namespace crank::replay {

struct DayPoint {
  std::uint32_t day = 0;
  double daily_sctr = 0.0;
  double cumulative_sctr = 0.0;
  std::uint64_t matched = 0;
  std::uint64_t clicks = 0;

  bool operator==(const DayPoint&) const = default;
};

/// Fraction of one product's matched displays that went to a creative on a day.
struct DisplayShare {
  std::string product;
  std::uint32_t day = 0;
  std::string creative;
  double share = 0.0;

  bool operator==(const DisplayShare&) const = default;
};

struct EvalReport {
  std::string policy;
  std::uint64_t seed = 0;
  std::uint64_t logged_impressions = 0;
  std::uint64_t matched_impressions = 0;
  std::uint64_t matched_clicks = 0;
  /// Unset when nothing matched (the ratio is undefined).
  std::optional<double> sctr;
  double oracle_ctr = 0.0;
  /// oracle_ctr − sctr; unset with sctr.
  std::optional<double> regret;
  std::uint64_t products = 0;
  std::uint64_t products_without_match = 0;
  std::vector<DayPoint> curve;
  std::vector<DisplayShare> shares;

  bool no_match() const noexcept { return !sctr.has_value(); }
  bool operator==(const EvalReport&) const = default;
};

using PolicyFactory = std::function<std::unique_ptr<bandit::Policy>()>;

struct ReplayOptions {
  std::uint64_t seed = 0;
  /// Threads for separable policies; results do not depend on it.
  std::size_t workers = 1;
  bool record_shares = true;
  std::string label;
};

/// Rejection replay over a uniformly logged dataset: a logged impression is
/// counted, and fed back to the policy, only when the policy picks the
/// logged creative. Separable policies get a fresh instance and their own
/// random stream per product; others see products sequentially in dataset
/// order through one instance.
EvalReport replay(const PolicyFactory& factory, const data::Dataset& dataset, const ReplayOptions& options);

/// Click-through rate of each product's empirically best creative, pooled
/// over products. Throws Errc::EmptyDataset.
double oracle_ctr(const data::Dataset& dataset);

/// report.regret / uniform.regret. Throws Errc::NoMatches when either
/// report has no sCTR and Errc::DivisionByZero when the uniform regret is 0.
double normalized_regret(const EvalReport& report, const EvalReport& uniform);

}  // namespace crank::replay
