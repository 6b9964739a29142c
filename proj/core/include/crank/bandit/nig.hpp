#pragma once

#include <cstdint>
#include <span>

#include "crank/core/linalg.hpp"
#include "crank/core/rng.hpp"

namespace crank::bandit {

/// Hyperparameters of the Normal–Inverse-Gamma prior: a₀ = b₀ = eta,
/// precision Σ₀ = ridge_scale·I, mean mu0 (zeros when left empty).
struct NigPriorConfig {
  double eta = 6.0;
  double ridge_scale = 0.25;
  FeatureVector mu0;

  void validate() const;
};

/// NigPriorConfig materialised at a concrete dimension.
class NigPrior {
 public:
  NigPrior(const NigPriorConfig& config, Eigen::Index dim);

  Eigen::Index dim() const noexcept { return mu0_.size(); }
  double a0() const noexcept { return eta_; }
  double b0() const noexcept { return eta_; }
  double ridge_scale() const noexcept { return ridge_; }
  const FeatureVector& mu0() const noexcept { return mu0_; }
  /// μ₀ᵀΣ₀μ₀
  double mu0_quadratic() const noexcept { return ridge_ * mu0_.squaredNorm(); }

 private:
  double eta_;
  double ridge_;
  FeatureVector mu0_;
};

struct Observation {
  FeatureVector features;
  double reward = 0.0;
};

/// Posterior (μ, Σ, a, b) after t observations, where Σ is the precision
/// matrix FᵀF + Σ₀. Keeps the sufficient statistics so incremental updates
/// reproduce the batch formulas; the Cholesky factor of Σ is rank-one
/// updated and rebuilt from Σ every kRefactorInterval updates.
class NigPosterior {
 public:
  static constexpr std::uint64_t kRefactorInterval = 1024;

  explicit NigPosterior(const NigPrior& prior);

  Eigen::Index dim() const noexcept { return mu_.size(); }
  const FeatureVector& mu() const noexcept { return mu_; }
  const Matrix& precision() const noexcept { return precision_; }
  const core::CholeskyFactor& factor() const noexcept { return factor_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::uint64_t t() const noexcept { return t_; }

  /// Conjugate update with one (f, y) pair.
  void observe(const FeatureVector& f, double reward);

  /// Rebuilds the factor and derived quantities from the stored statistics.
  void refactor();

  /// Restores a posterior from (μ, Σ, a, b, t); the sufficient statistics
  /// are recovered through the prior.
  static NigPosterior restore(const NigPrior& prior, const FeatureVector& mu,
                              const Matrix& precision, double a, double b, std::uint64_t t);

 private:
  void recompute_moments();

  Matrix precision_;
  core::CholeskyFactor factor_;
  FeatureVector rhs_;  // Σ₀μ₀ + Fᵀy
  double yty_ = 0.0;
  double a0_;
  double b0_;
  double mu0_quad_;
  std::uint64_t t_ = 0;
  std::uint64_t since_refactor_ = 0;
  FeatureVector mu_;
  double a_;
  double b_;
};

/// Batch posterior from the full history, computed directly from
/// Σ = FᵀF + Σ₀, μ = Σ⁻¹(Σ₀μ₀ + Fᵀy), a = a₀ + t/2,
/// b = b₀ + ½(yᵀy + μ₀ᵀΣ₀μ₀ − μᵀΣμ).
NigPosterior nig_update(const NigPrior& prior, std::span<const Observation> history);

/// σ² ∼ IG(a, b), then w ∼ N(μ, σ²Σ⁻¹).
FeatureVector thompson_draw(const NigPosterior& posterior, core::SeededRng& rng);
void thompson_draw_into(const NigPosterior& posterior, core::SeededRng& rng, FeatureVector& out);

}  // namespace crank::bandit
