#pragma once

#include <cstdint>
#include <span>

namespace crank::prior {

/// Beta(alpha, beta) prior over creative CTRs.
struct SmoothingPrior {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const noexcept { return alpha / (alpha + beta); }
};

struct ClickCount {
  std::uint64_t clicks = 0;
  std::uint64_t impressions = 0;
};

/// clicks / impressions. Throws Errc::ZeroImpressions when impressions == 0.
double empirical_ctr(std::uint64_t clicks, std::uint64_t impressions);

/// (clicks + α) / (impressions + α + β); the prior mean when impressions == 0.
double smoothed_ctr(std::uint64_t clicks, std::uint64_t impressions,
                    const SmoothingPrior& prior);

struct SmoothingFitOptions {
  double relative_tolerance = 1e-8;
  int max_iterations = 500;
  double variance_floor = 1e-8;
  std::size_t min_creatives = 100;
};

struct SmoothingFit {
  SmoothingPrior prior;
  /// Set when every observed CTR was identical; the prior then comes from
  /// method of moments with the variance floor and no refinement.
  bool degenerate = false;
  bool converged = false;
  int iterations = 0;
};

/// Beta-Binomial maximum likelihood for (α, β): method-of-moments start,
/// then Minka's fixed-point iteration. Creatives with zero impressions are
/// ignored; fewer than `min_creatives` usable creatives is a precondition
/// violation.
SmoothingFit fit_smoothing_prior(std::span<const ClickCount> counts,
                                 const SmoothingFitOptions& options = {});

}  // namespace crank::prior
