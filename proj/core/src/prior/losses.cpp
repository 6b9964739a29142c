#include "crank/prior/losses.hpp"

#include <cmath>

#include "crank/core/error.hpp"

namespace crank::prior {

namespace {

void require_same_size(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const char* what) {
  if (a.size() != b.size()) {
    fail(Errc::PreconditionViolated, std::string(what) + ": length mismatch");
  }
}

// log-softmax with max subtraction.
Eigen::VectorXd log_top1(const Scores& scores) {
  const double top = scores.maxCoeff();
  const double lse = top + std::log((scores.array() - top).exp().sum());
  return scores.array() - lse;
}

}  // namespace

Scores top1_probabilities(const Scores& scores) {
  if (scores.size() == 0) fail(Errc::PreconditionViolated, "top1_probabilities: empty list");
  Eigen::VectorXd p = (scores.array() - scores.maxCoeff()).exp();
  return p / p.sum();
}

Scores rank_labels(const Eigen::VectorXd& ctrs, double temperature) {
  if (!(temperature > 0.0)) {
    fail(Errc::InvalidHyperparameter, "rank_labels: temperature must be positive");
  }
  return top1_probabilities(ctrs / temperature);
}

double listwise_loss(const Scores& scores, const Eigen::VectorXd& labels) {
  require_same_size(scores, labels, "listwise_loss");
  return -labels.dot(log_top1(scores));
}

double pointwise_loss(const Scores& scores, const Eigen::VectorXd& ctrs) {
  require_same_size(scores, ctrs, "pointwise_loss");
  return (ctrs - scores).squaredNorm();
}

double combined_loss(const Scores& scores, const Eigen::VectorXd& ctrs,
                     const Eigen::VectorXd& labels, double gamma) {
  if (!(gamma >= 0.0)) fail(Errc::InvalidHyperparameter, "combined_loss: gamma must be >= 0");
  return listwise_loss(scores, labels) + gamma * pointwise_loss(scores, ctrs);
}

Eigen::VectorXd listwise_gradient(const Scores& scores, const Eigen::VectorXd& labels) {
  require_same_size(scores, labels, "listwise_gradient");
  return top1_probabilities(scores) * labels.sum() - labels;
}

Eigen::VectorXd pointwise_gradient(const Scores& scores, const Eigen::VectorXd& ctrs) {
  require_same_size(scores, ctrs, "pointwise_gradient");
  return 2.0 * (scores - ctrs);
}

LossValue combined_loss_and_gradient(const Scores& scores, const Eigen::VectorXd& ctrs,
                                     const Eigen::VectorXd& labels, double gamma,
                                     Eigen::VectorXd& grad_scores) {
  require_same_size(scores, ctrs, "combined_loss");
  require_same_size(scores, labels, "combined_loss");
  const Eigen::VectorXd log_p = log_top1(scores);
  LossValue v;
  v.listwise = -labels.dot(log_p);
  v.pointwise = (ctrs - scores).squaredNorm();
  v.combined = v.listwise + gamma * v.pointwise;
  grad_scores = log_p.array().exp().matrix() * labels.sum() - labels;
  grad_scores += (2.0 * gamma) * (scores - ctrs);
  return v;
}

}  // namespace crank::prior
