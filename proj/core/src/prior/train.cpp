#include "crank/prior/train.hpp"

#include <cmath>
#include <random>

#include "crank/core/error.hpp"
#include "crank/core/rng.hpp"
#include "crank/prior/losses.hpp"

namespace crank::prior {

std::uint64_t ProductGroup::impressions() const {
  std::uint64_t total = 0;
  for (const auto& c : creatives) total += c.impressions;
  return total;
}

double sampling_weight(std::uint64_t impressions) {
  return std::log1p(static_cast<double>(impressions));
}

void TrainConfig::validate() const {
  if (!(gamma >= 0.0)) fail(Errc::InvalidConfig, "gamma must be >= 0");
  if (!(temperature > 0.0)) fail(Errc::InvalidConfig, "temperature must be > 0");
  if (!(learning_rate > 0.0) || !(final_learning_rate > 0.0)) {
    fail(Errc::InvalidConfig, "learning rates must be > 0");
  }
  if (epochs < 0) fail(Errc::InvalidConfig, "epochs must be >= 0");
  if (batch_size <= 0) fail(Errc::InvalidConfig, "batch size must be > 0");
  if (hidden_width < 0) fail(Errc::InvalidConfig, "hidden width must be >= 0");
}

namespace {

struct PreparedProduct {
  Matrix features;
  Eigen::VectorXd ctrs;
  Eigen::VectorXd labels;
  double weight = 0.0;
};

std::vector<PreparedProduct> prepare(std::span<const ProductGroup> groups,
                                     const TrainConfig& config,
                                     const std::optional<SmoothingPrior>& smoothing) {
  const Eigen::Index d = groups.front().creatives.front().features.size();
  std::vector<PreparedProduct> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    const auto m = static_cast<Eigen::Index>(g.creatives.size());
    if (m < 2) {
      fail(Errc::PreconditionViolated,
           "product " + g.product_id + " has fewer than two creatives");
    }
    PreparedProduct p;
    p.features.resize(m, d);
    p.ctrs.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto& c = g.creatives[static_cast<std::size_t>(i)];
      if (c.features.size() != d) {
        fail(Errc::PreconditionViolated, "creative " + c.creative_id + " has dimension " +
                                             std::to_string(c.features.size()) + ", expected " +
                                             std::to_string(d));
      }
      if (c.clicks > c.impressions) {
        fail(Errc::PreconditionViolated, "creative " + c.creative_id + " has clicks > impressions");
      }
      p.features.row(i) = c.features.transpose();
      if (smoothing) {
        p.ctrs(i) = smoothed_ctr(c.clicks, c.impressions, *smoothing);
      } else {
        p.ctrs(i) = c.impressions > 0 ? empirical_ctr(c.clicks, c.impressions) : 0.0;
      }
    }
    p.labels = rank_labels(p.ctrs, config.temperature);
    p.weight = config.weighted_sampling ? sampling_weight(g.impressions()) : 1.0;
    out.push_back(std::move(p));
  }
  return out;
}

std::optional<SmoothingPrior> fit_labels_prior(std::span<const ProductGroup> groups,
                                               const TrainConfig& config) {
  if (!config.label_smoothing) return std::nullopt;
  std::vector<ClickCount> counts;
  for (const auto& g : groups) {
    for (const auto& c : g.creatives) counts.push_back({c.clicks, c.impressions});
  }
  std::size_t usable = 0;
  for (const auto& c : counts) usable += c.impressions > 0 ? 1 : 0;
  if (usable < SmoothingFitOptions{}.min_creatives) return std::nullopt;
  return fit_smoothing_prior(counts).prior;
}

EpochLoss mean_loss(const Scorer& scorer, const std::vector<PreparedProduct>& products,
                    double gamma) {
  EpochLoss total;
  for (const auto& p : products) {
    const Eigen::VectorXd s = scorer.scores(p.features);
    total.listwise += listwise_loss(s, p.labels);
    total.pointwise += pointwise_loss(s, p.ctrs);
  }
  const auto n = static_cast<double>(products.size());
  total.listwise /= n;
  total.pointwise /= n;
  total.combined = total.listwise + gamma * total.pointwise;
  return total;
}

void check_finite(const EpochLoss& loss, int epoch) {
  if (!std::isfinite(loss.combined)) {
    fail(Errc::NonFiniteLoss,
         "training loss is not finite after epoch " + std::to_string(epoch) +
             " (learning rate too high?)");
  }
}

}  // namespace

EpochLoss evaluate_loss(const Scorer& scorer, std::span<const ProductGroup> groups,
                        const TrainConfig& config,
                        const std::optional<SmoothingPrior>& smoothing) {
  if (groups.empty()) fail(Errc::EmptyDataset, "evaluate_loss: no products");
  return mean_loss(scorer, prepare(groups, config, smoothing), config.gamma);
}

TrainResult train_scorer(std::span<const ProductGroup> groups, const TrainConfig& config) {
  config.validate();
  if (groups.empty()) fail(Errc::EmptyDataset, "train_scorer: no products");
  if (groups.front().creatives.empty()) {
    fail(Errc::PreconditionViolated, "train_scorer: product without creatives");
  }

  TrainResult result;
  result.smoothing = fit_labels_prior(groups, config);
  const auto products = prepare(groups, config, result.smoothing);
  const Eigen::Index d = products.front().features.cols();

  core::SeededRng rng(config.seed, 0x7261696eULL);
  result.scorer = config.hidden_width > 0 ? Scorer::hidden(d, config.hidden_width, rng)
                                          : Scorer::linear(d);

  result.trace.push_back(mean_loss(result.scorer, products, config.gamma));
  check_finite(result.trace.back(), 0);
  if (config.epochs == 0) return result;

  std::vector<double> weights;
  weights.reserve(products.size());
  double weight_sum = 0.0;
  for (const auto& p : products) {
    weights.push_back(p.weight);
    weight_sum += p.weight;
  }
  if (!(weight_sum > 0.0)) {
    fail(Errc::DegenerateData, "train_scorer: every product has zero sampling weight");
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

  const std::size_t steps_per_epoch =
      (products.size() + static_cast<std::size_t>(config.batch_size) - 1) /
      static_cast<std::size_t>(config.batch_size);
  const double decay = config.epochs > 1
                           ? std::pow(config.final_learning_rate / config.learning_rate,
                                      1.0 / static_cast<double>(config.epochs - 1))
                           : 1.0;

  Eigen::VectorXd theta = result.scorer.parameters();
  Eigen::VectorXd grad(theta.size());
  Eigen::VectorXd grad_scores;
  double lr = config.learning_rate;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t step = 0; step < steps_per_epoch; ++step) {
      grad.setZero();
      for (int b = 0; b < config.batch_size; ++b) {
        const auto& p = products[pick(rng)];
        const Eigen::VectorXd s = result.scorer.scores(p.features);
        combined_loss_and_gradient(s, p.ctrs, p.labels, config.gamma, grad_scores);
        result.scorer.accumulate_gradient(p.features, grad_scores, grad);
      }
      theta.noalias() -= (lr / config.batch_size) * grad;
      if (!theta.allFinite()) {
        fail(Errc::NonFiniteLoss, "scorer parameters diverged in epoch " + std::to_string(epoch) +
                                      " (learning rate too high?)");
      }
      result.scorer.set_parameters(theta);
    }
    result.trace.push_back(mean_loss(result.scorer, products, config.gamma));
    result.trace.back().epoch = epoch;
    check_finite(result.trace.back(), epoch);
    lr *= decay;
  }
  return result;
}

}  // namespace crank::prior
