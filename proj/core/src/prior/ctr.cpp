#include "crank/prior/ctr.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "crank/core/error.hpp"

namespace crank::prior {

double empirical_ctr(std::uint64_t clicks, std::uint64_t impressions) {
  if (impressions == 0) fail(Errc::ZeroImpressions, "empirical_ctr: zero impressions");
  if (clicks > impressions) {
    fail(Errc::PreconditionViolated, "empirical_ctr: clicks exceed impressions");
  }
  return static_cast<double>(clicks) / static_cast<double>(impressions);
}

double smoothed_ctr(std::uint64_t clicks, std::uint64_t impressions,
                    const SmoothingPrior& prior) {
  if (clicks > impressions) {
    fail(Errc::PreconditionViolated, "smoothed_ctr: clicks exceed impressions");
  }
  return (static_cast<double>(clicks) + prior.alpha) /
         (static_cast<double>(impressions) + prior.alpha + prior.beta);
}

namespace {

SmoothingPrior moments_prior(double mean, double variance) {
  mean = std::clamp(mean, 1e-6, 1.0 - 1e-6);
  // Over-dispersion beyond a Bernoulli leaves no valid Beta; keep s small but positive.
  const double s = std::max(mean * (1.0 - mean) / variance - 1.0, 1e-3);
  return {mean * s, (1.0 - mean) * s};
}

}  // namespace

SmoothingFit fit_smoothing_prior(std::span<const ClickCount> counts,
                                 const SmoothingFitOptions& options) {
  // Identical (clicks, impressions) pairs contribute identical terms, so the
  // likelihood is evaluated over distinct pairs with multiplicities.
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> pairs;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t usable = 0;
  for (const auto& c : counts) {
    if (c.clicks > c.impressions) {
      fail(Errc::PreconditionViolated, "fit_smoothing_prior: clicks exceed impressions");
    }
    if (c.impressions == 0) continue;
    ++usable;
    const double ctr = static_cast<double>(c.clicks) / static_cast<double>(c.impressions);
    sum += ctr;
    sum_sq += ctr * ctr;
    pairs[{c.clicks, c.impressions}] += 1.0;
  }
  if (usable < options.min_creatives) {
    fail(Errc::PreconditionViolated,
         "fit_smoothing_prior: need at least " + std::to_string(options.min_creatives) +
             " creatives with impressions, got " + std::to_string(usable));
  }

  const double n = static_cast<double>(usable);
  const double mean = sum / n;
  const double variance = std::max(sum_sq / n - mean * mean, 0.0);

  SmoothingFit fit;
  if (pairs.size() == 1 || variance <= 0.0 ||
      std::all_of(pairs.begin(), pairs.end(), [&](const auto& kv) {
        return kv.first.first * pairs.begin()->first.second ==
               pairs.begin()->first.first * kv.first.second;
      })) {
    fit.prior = moments_prior(mean, std::max(variance, options.variance_floor));
    fit.degenerate = true;
    return fit;
  }

  using boost::math::digamma;
  SmoothingPrior p = moments_prior(mean, std::max(variance, options.variance_floor));
  for (int it = 1; it <= options.max_iterations; ++it) {
    double num_a = 0.0;
    double num_b = 0.0;
    double den = 0.0;
    const double dg_a = digamma(p.alpha);
    const double dg_b = digamma(p.beta);
    const double dg_ab = digamma(p.alpha + p.beta);
    for (const auto& [key, weight] : pairs) {
      const auto clicks = static_cast<double>(key.first);
      const auto imps = static_cast<double>(key.second);
      num_a += weight * (digamma(clicks + p.alpha) - dg_a);
      num_b += weight * (digamma(imps - clicks + p.beta) - dg_b);
      den += weight * (digamma(imps + p.alpha + p.beta) - dg_ab);
    }
    const SmoothingPrior next{p.alpha * num_a / den, p.beta * num_b / den};
    if (!std::isfinite(next.alpha) || !std::isfinite(next.beta) || next.alpha <= 0.0 ||
        next.beta <= 0.0) {
      fail(Errc::DegenerateData, "fit_smoothing_prior: fixed-point iteration left the domain");
    }
    const double change = std::max(std::abs(next.alpha - p.alpha) / p.alpha,
                                   std::abs(next.beta - p.beta) / p.beta);
    p = next;
    fit.iterations = it;
    if (change < options.relative_tolerance) {
      fit.converged = true;
      break;
    }
  }
  fit.prior = p;
  return fit;
}

}  // namespace crank::prior
