#include "crank/core/sampling.hpp"

#include <cmath>
#include <string>

#include "crank/core/error.hpp"

namespace crank::core {

double sample_inverse_gamma(SeededRng& rng, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    fail(Errc::InvalidHyperparameter, "inverse gamma requires a > 0 and b > 0 (got a=" +
                                          std::to_string(a) + ", b=" + std::to_string(b) + ")");
  }
  return b / rng.gamma(a);
}

void sample_mvn_into(SeededRng& rng, const FeatureVector& mean,
                     const CholeskyFactor& precision_factor, double scale,
                     FeatureVector& out) {
  if (mean.size() != precision_factor.dim()) {
    fail(Errc::PreconditionViolated, "sample_mvn: dimension mismatch");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    fail(Errc::InvalidHyperparameter, "sample_mvn: scale must be positive");
  }
  out.resize(mean.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = rng.normal();
  // Precision = L·Lᵀ, so x = L⁻ᵀ·z has covariance precision⁻¹.
  precision_factor.solve_transpose_in_place(out);
  out *= std::sqrt(scale);
  out += mean;
}

FeatureVector sample_mvn(SeededRng& rng, const FeatureVector& mean,
                         const SpdMatrix& precision, double scale) {
  FeatureVector out;
  sample_mvn_into(rng, mean, precision.factor(), scale, out);
  return out;
}

}  // namespace crank::core
