#include "crank/prior/scorer.hpp"

#include <cmath>

#include "crank/core/error.hpp"

namespace crank::prior {

Scorer Scorer::linear(Eigen::Index input_dim) {
  Scorer s;
  s.input_dim_ = input_dim;
  s.head_ = FeatureVector::Zero(input_dim);
  return s;
}

Scorer Scorer::hidden(Eigen::Index input_dim, Eigen::Index width, core::SeededRng& rng) {
  if (width <= 0) fail(Errc::InvalidConfig, "hidden scorer width must be positive");
  Scorer s;
  s.input_dim_ = input_dim;
  const double in_bound = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double head_bound = 1.0 / std::sqrt(static_cast<double>(width));
  auto draw = [&](double bound) { return (2.0 * rng.uniform() - 1.0) * bound; };
  s.hidden_w_.resize(width, input_dim);
  for (Eigen::Index j = 0; j < input_dim; ++j) {
    for (Eigen::Index i = 0; i < width; ++i) s.hidden_w_(i, j) = draw(in_bound);
  }
  s.hidden_b_.resize(width);
  for (Eigen::Index i = 0; i < width; ++i) s.hidden_b_(i) = draw(in_bound);
  s.head_.resize(width);
  for (Eigen::Index i = 0; i < width; ++i) s.head_(i) = draw(head_bound);
  return s;
}

Scorer Scorer::from_parts(Matrix hidden_weights, FeatureVector hidden_bias, FeatureVector head) {
  Scorer s;
  if (hidden_weights.size() == 0) {
    s.input_dim_ = head.size();
    s.head_ = std::move(head);
    return s;
  }
  if (hidden_weights.rows() != head.size() || hidden_bias.size() != head.size()) {
    fail(Errc::InvalidConfig, "scorer: hidden layer shape does not match head");
  }
  s.input_dim_ = hidden_weights.cols();
  s.hidden_w_ = std::move(hidden_weights);
  s.hidden_b_ = std::move(hidden_bias);
  s.head_ = std::move(head);
  return s;
}

FeatureVector Scorer::embed(const FeatureVector& f) const {
  if (f.size() != input_dim_) fail(Errc::PreconditionViolated, "scorer: feature dimension mismatch");
  if (!has_hidden()) return f;
  return (hidden_w_ * f + hidden_b_).array().tanh().matrix();
}

double Scorer::score(const FeatureVector& f) const { return embed(f).dot(head_); }

Eigen::VectorXd Scorer::scores(const Matrix& features) const {
  if (features.cols() != input_dim_) {
    fail(Errc::PreconditionViolated, "scorer: feature dimension mismatch");
  }
  if (!has_hidden()) return features * head_;
  const Matrix h = ((features * hidden_w_.transpose()).rowwise() + hidden_b_.transpose())
                       .array()
                       .tanh()
                       .matrix();
  return h * head_;
}

Eigen::Index Scorer::parameter_count() const noexcept {
  return head_.size() + hidden_w_.size() + hidden_b_.size();
}

Eigen::VectorXd Scorer::parameters() const {
  Eigen::VectorXd theta(parameter_count());
  theta.head(head_.size()) = head_;
  if (has_hidden()) {
    theta.segment(head_.size(), hidden_w_.size()) =
        Eigen::Map<const Eigen::VectorXd>(hidden_w_.data(), hidden_w_.size());
    theta.tail(hidden_b_.size()) = hidden_b_;
  }
  return theta;
}

void Scorer::set_parameters(const Eigen::VectorXd& theta) {
  if (theta.size() != parameter_count()) {
    fail(Errc::PreconditionViolated, "scorer: parameter vector has wrong length");
  }
  head_ = theta.head(head_.size());
  if (has_hidden()) {
    Eigen::Map<Eigen::VectorXd>(hidden_w_.data(), hidden_w_.size()) =
        theta.segment(head_.size(), hidden_w_.size());
    hidden_b_ = theta.tail(hidden_b_.size());
  }
}

void Scorer::accumulate_gradient(const Matrix& features, const Eigen::VectorXd& grad_scores,
                                 Eigen::VectorXd& grad_params) const {
  if (!has_hidden()) {
    grad_params.head(head_.size()).noalias() += features.transpose() * grad_scores;
    return;
  }
  const Matrix h = ((features * hidden_w_.transpose()).rowwise() + hidden_b_.transpose())
                       .array()
                       .tanh()
                       .matrix();
  const Eigen::Index width = head_.size();
  grad_params.head(width).noalias() += h.transpose() * grad_scores;
  // ds/dpre = w ⊙ (1 − h²) per row.
  const Matrix dpre =
      ((1.0 - h.array().square()).rowwise() * head_.transpose().array()).colwise() *
      grad_scores.array();
  Eigen::Map<Matrix> grad_w(grad_params.data() + width, width, input_dim_);
  grad_w.noalias() += dpre.transpose() * features;
  grad_params.tail(width) += dpre.colwise().sum().transpose();
}

}  // namespace crank::prior
