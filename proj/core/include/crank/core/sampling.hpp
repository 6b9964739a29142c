#pragma once

#include "crank/core/linalg.hpp"
#include "crank/core/rng.hpp"

namespace crank::core {

/// σ² ∼ IG(a, b), i.e. b / Gamma(a, 1). Mean b/(a−1) for a > 1.
/// Throws Errc::InvalidHyperparameter unless a > 0 and b > 0.
double sample_inverse_gamma(SeededRng& rng, double a, double b);

/// Draw from N(mean, scale · precision⁻¹).
FeatureVector sample_mvn(SeededRng& rng, const FeatureVector& mean,
                         const SpdMatrix& precision, double scale);

/// Allocation-free variant for hot loops; `out` is resized if needed.
void sample_mvn_into(SeededRng& rng, const FeatureVector& mean,
                     const CholeskyFactor& precision_factor, double scale,
                     FeatureVector& out);

}  // namespace crank::core
