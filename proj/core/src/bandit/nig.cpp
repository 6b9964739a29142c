#include "crank/bandit/nig.hpp"

#include <cmath>
#include <string>

#include "crank/core/error.hpp"
#include "crank/core/sampling.hpp"

namespace crank::bandit {

void NigPriorConfig::validate() const {
  if (!(eta > 1.0)) fail(Errc::InvalidHyperparameter, "eta must be > 1");
  if (!(ridge_scale > 0.0)) fail(Errc::InvalidHyperparameter, "ridge_scale must be > 0");
  if (!mu0.allFinite()) fail(Errc::InvalidHyperparameter, "mu0 has non-finite entries");
}

NigPrior::NigPrior(const NigPriorConfig& config, Eigen::Index dim)
    : eta_(config.eta), ridge_(config.ridge_scale) {
  config.validate();
  if (config.mu0.size() == 0) {
    mu0_ = FeatureVector::Zero(dim);
  } else if (config.mu0.size() != dim) {
    fail(Errc::PreconditionViolated, "prior mean has dimension " +
                                         std::to_string(config.mu0.size()) + ", features have " +
                                         std::to_string(dim));
  } else {
    mu0_ = config.mu0;
  }
}

NigPosterior::NigPosterior(const NigPrior& prior)
    : precision_(prior.ridge_scale() * Matrix::Identity(prior.dim(), prior.dim())),
      factor_(std::sqrt(prior.ridge_scale()) * Matrix::Identity(prior.dim(), prior.dim())),
      rhs_(prior.ridge_scale() * prior.mu0()),
      a0_(prior.a0()),
      b0_(prior.b0()),
      mu0_quad_(prior.mu0_quadratic()),
      mu_(prior.mu0()),
      a_(prior.a0()),
      b_(prior.b0()) {}

void NigPosterior::recompute_moments() {
  mu_ = factor_.solve(rhs_);
  a_ = a0_ + 0.5 * static_cast<double>(t_);
  b_ = b0_ + 0.5 * (yty_ + mu0_quad_ - mu_.dot(rhs_));
}

void NigPosterior::refactor() {
  precision_ = 0.5 * (precision_ + precision_.transpose());
  factor_ = core::cholesky(precision_);
  since_refactor_ = 0;
  recompute_moments();
  if (!(b_ > 0.0)) fail(Errc::NotPositiveDefinite, "posterior scale b is not positive");
}

void NigPosterior::observe(const FeatureVector& f, double reward) {
  if (f.size() != dim()) fail(Errc::PreconditionViolated, "observe: feature dimension mismatch");
  precision_.noalias() += f * f.transpose();
  rhs_.noalias() += reward * f;
  yty_ += reward * reward;
  ++t_;
  if (++since_refactor_ >= kRefactorInterval) {
    refactor();
    return;
  }
  factor_.rank_one_update(f);
  recompute_moments();
  if (!mu_.allFinite() || !(b_ > 0.0)) refactor();
}

NigPosterior NigPosterior::restore(const NigPrior& prior, const FeatureVector& mu,
                                   const Matrix& precision, double a, double b,
                                   std::uint64_t t) {
  if (mu.size() != prior.dim() || precision.rows() != prior.dim() ||
      precision.cols() != prior.dim()) {
    fail(Errc::PreconditionViolated, "restore: dimension mismatch with prior");
  }
  if (std::abs(a - (prior.a0() + 0.5 * static_cast<double>(t))) > 1e-9 * a) {
    fail(Errc::PreconditionViolated, "restore: a does not match a0 + t/2");
  }
  NigPosterior post(prior);
  post.precision_ = precision;
  post.t_ = t;
  post.rhs_ = precision * mu;
  post.yty_ = 2.0 * (b - prior.b0()) - prior.mu0_quadratic() + mu.dot(post.rhs_);
  post.refactor();
  return post;
}

NigPosterior nig_update(const NigPrior& prior, std::span<const Observation> history) {
  const Eigen::Index d = prior.dim();
  Matrix precision = prior.ridge_scale() * Matrix::Identity(d, d);
  FeatureVector fty = FeatureVector::Zero(d);
  double yty = 0.0;
  for (const auto& obs : history) {
    if (obs.features.size() != d) {
      fail(Errc::PreconditionViolated, "nig_update: feature dimension mismatch");
    }
    precision.noalias() += obs.features * obs.features.transpose();
    fty.noalias() += obs.reward * obs.features;
    yty += obs.reward * obs.reward;
  }
  const auto t = static_cast<std::uint64_t>(history.size());
  const core::CholeskyFactor factor = core::cholesky(precision);
  const FeatureVector rhs = prior.ridge_scale() * prior.mu0() + fty;
  const FeatureVector mu = factor.solve(rhs);
  const double a = prior.a0() + 0.5 * static_cast<double>(t);
  const double b = prior.b0() + 0.5 * (yty + prior.mu0_quadratic() - mu.dot(precision * mu));
  return NigPosterior::restore(prior, mu, precision, a, b, t);
}

void thompson_draw_into(const NigPosterior& posterior, core::SeededRng& rng, FeatureVector& out) {
  const double sigma2 = core::sample_inverse_gamma(rng, posterior.a(), posterior.b());
  core::sample_mvn_into(rng, posterior.mu(), posterior.factor(), sigma2, out);
}

FeatureVector thompson_draw(const NigPosterior& posterior, core::SeededRng& rng) {
  FeatureVector out;
  thompson_draw_into(posterior, rng, out);
  return out;
}

}  // namespace crank::bandit
