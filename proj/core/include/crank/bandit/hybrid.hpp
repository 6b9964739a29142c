#pragma once

#include <cstdint>
#include <optional>

#include "crank/bandit/nig.hpp"

namespace crank::bandit {

/// λ = 1 / (1 + exp((θ₂ − impressions) / θ₁)).
struct FusionConfig {
  double theta1 = 50.0;
  double theta2 = 150.0;

  void validate() const;
};

double fusion_lambda(std::uint64_t impressions, const FusionConfig& fusion);

/// Shared (product-wise) and specific (creative-wise) posteriors for one
/// creative plus the impression count of the product that gates them.
struct HybridArmState {
  const NigPosterior& shared;
  const NigPosterior& specific;
  std::uint64_t product_impressions = 0;
};

/// (1 − λ)·fᵀw_shared + λ·fᵀw_specific with both weight vectors drawn by
/// Thompson sampling. A side whose weight is exactly zero is not sampled,
/// which keeps pinned-λ runs draw-for-draw identical to the single-posterior
/// policies.
double hybrid_score(const HybridArmState& arm, const FeatureVector& f, const FusionConfig& fusion,
                    core::SeededRng& rng, std::optional<double> lambda_override = std::nullopt);

/// Same, with caller-provided scratch to avoid allocations.
double hybrid_score(const HybridArmState& arm, const FeatureVector& f, double lambda,
                    core::SeededRng& rng, FeatureVector& scratch);

}  // namespace crank::bandit
