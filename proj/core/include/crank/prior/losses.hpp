#pragma once

#include <Eigen/Core>

namespace crank::prior {

using Scores = Eigen::VectorXd;

/// Probability of each creative being ranked first: softmax(scores).
Scores top1_probabilities(const Scores& scores);

/// Ranking targets softmax(ctr / temperature).
Scores rank_labels(const Eigen::VectorXd& ctrs, double temperature);

/// Cross entropy between `labels` and the top-1 distribution of `scores`.
double listwise_loss(const Scores& scores, const Eigen::VectorXd& labels);

/// Sum of squared differences between scores and CTRs.
double pointwise_loss(const Scores& scores, const Eigen::VectorXd& ctrs);

double combined_loss(const Scores& scores, const Eigen::VectorXd& ctrs,
                     const Eigen::VectorXd& labels, double gamma);

struct LossValue {
  double listwise = 0.0;
  double pointwise = 0.0;
  double combined = 0.0;
};

/// Loss terms plus d(combined)/d(scores) written into `grad_scores`.
LossValue combined_loss_and_gradient(const Scores& scores, const Eigen::VectorXd& ctrs,
                                     const Eigen::VectorXd& labels, double gamma,
                                     Eigen::VectorXd& grad_scores);

Eigen::VectorXd listwise_gradient(const Scores& scores, const Eigen::VectorXd& labels);
Eigen::VectorXd pointwise_gradient(const Scores& scores, const Eigen::VectorXd& ctrs);

}  // namespace crank::prior
