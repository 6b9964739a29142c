#include "crank/bandit/hybrid.hpp"

#include <cmath>

#include "crank/core/error.hpp"

namespace crank::bandit {

void FusionConfig::validate() const {
  if (!(theta1 > 0.0)) fail(Errc::InvalidHyperparameter, "theta1 must be > 0");
  if (!std::isfinite(theta2)) fail(Errc::InvalidHyperparameter, "theta2 must be finite");
}

double fusion_lambda(std::uint64_t impressions, const FusionConfig& fusion) {
  return 1.0 / (1.0 + std::exp((fusion.theta2 - static_cast<double>(impressions)) / fusion.theta1));
}

double hybrid_score(const HybridArmState& arm, const FeatureVector& f, double lambda,
                    core::SeededRng& rng, FeatureVector& scratch) {
  double score = 0.0;
  if (lambda != 1.0) {
    thompson_draw_into(arm.shared, rng, scratch);
    score += (1.0 - lambda) * f.dot(scratch);
  }
  if (lambda != 0.0) {
    thompson_draw_into(arm.specific, rng, scratch);
    score += lambda * f.dot(scratch);
  }
  return score;
}

double hybrid_score(const HybridArmState& arm, const FeatureVector& f, const FusionConfig& fusion,
                    core::SeededRng& rng, std::optional<double> lambda_override) {
  FeatureVector scratch;
  const double lambda =
      lambda_override ? *lambda_override : fusion_lambda(arm.product_impressions, fusion);
  return hybrid_score(arm, f, lambda, rng, scratch);
}

}  // namespace crank::bandit
