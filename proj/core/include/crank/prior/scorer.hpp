#pragma once

#include <Eigen/Core>

#include "crank/core/linalg.hpp"
#include "crank/core/rng.hpp"

namespace crank::prior {

/// Linear head w of the attractiveness score s = fᵀw.
struct ScorerWeights {
  FeatureVector w;
};

/// Attractiveness scorer. The linear form scores s = fᵀw directly on the
/// input features. The hidden-layer form first embeds h = tanh(W·f + c) and
/// scores s = hᵀw; the bandit then works on h with w as its prior mean.
class Scorer {
 public:
  Scorer() = default;

  /// Zero-initialised linear scorer.
  static Scorer linear(Eigen::Index input_dim);
  /// One tanh hidden layer, weights uniform in ±1/√fan_in.
  static Scorer hidden(Eigen::Index input_dim, Eigen::Index width, core::SeededRng& rng);
  static Scorer from_parts(Matrix hidden_weights, FeatureVector hidden_bias, FeatureVector head);

  bool has_hidden() const noexcept { return hidden_w_.size() > 0; }
  Eigen::Index input_dim() const noexcept { return input_dim_; }
  Eigen::Index embedding_dim() const noexcept { return head_.size(); }

  const FeatureVector& head() const noexcept { return head_; }
  const Matrix& hidden_weights() const noexcept { return hidden_w_; }
  const FeatureVector& hidden_bias() const noexcept { return hidden_b_; }
  ScorerWeights weights() const { return {head_}; }

  FeatureVector embed(const FeatureVector& f) const;
  double score(const FeatureVector& f) const;
  /// Scores for each row of `features` (M×d).
  Eigen::VectorXd scores(const Matrix& features) const;

  Eigen::Index parameter_count() const noexcept;
  /// Layout: head, then hidden weights (column-major), then hidden bias.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& theta);

  /// grad_params += Σ_m grad_scores[m] · ds_m/dθ.
  void accumulate_gradient(const Matrix& features, const Eigen::VectorXd& grad_scores,
                           Eigen::VectorXd& grad_params) const;

 private:
  Eigen::Index input_dim_ = 0;
  Matrix hidden_w_;
  FeatureVector hidden_b_;
  FeatureVector head_;
};

}  // namespace crank::prior
