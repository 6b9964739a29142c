#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crank/core/linalg.hpp"
#include "crank/prior/ctr.hpp"
#include "crank/prior/scorer.hpp"

namespace crank::prior {

struct CreativeStats {
  std::string creative_id;
  FeatureVector features;
  std::uint64_t impressions = 0;
  std::uint64_t clicks = 0;
};

/// One product and its candidate creatives (at least two).
struct ProductGroup {
  std::string product_id;
  std::vector<CreativeStats> creatives;

  std::uint64_t impressions() const;
};

/// Product sampling weight ln(1 + impressions); zero means never drawn.
double sampling_weight(std::uint64_t impressions);

struct TrainConfig {
  double gamma = 0.5;
  double temperature = 0.01;
  double learning_rate = 0.5;
  double final_learning_rate = 0.005;
  int epochs = 30;
  int batch_size = 64;
  bool weighted_sampling = true;
  /// Fit a Beta-Binomial prior on the training creatives and use smoothed
  /// CTRs as targets (needs at least 100 creatives with impressions).
  bool label_smoothing = true;
  /// 0 selects the linear scorer.
  int hidden_width = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct EpochLoss {
  int epoch = 0;
  double listwise = 0.0;
  double pointwise = 0.0;
  double combined = 0.0;
};

struct TrainResult {
  Scorer scorer;
  /// Entry 0 is the loss at initialisation, entry e the loss after epoch e.
  std::vector<EpochLoss> trace;
  std::optional<SmoothingPrior> smoothing;
};

/// Mini-batch SGD on the combined list-wise + point-wise loss. Products are
/// drawn with replacement, proportionally to sampling_weight() when weighted
/// sampling is on, and the learning rate decays geometrically per epoch.
/// Throws Errc::NonFiniteLoss when training diverges.
TrainResult train_scorer(std::span<const ProductGroup> groups, const TrainConfig& config);

/// Mean per-product loss of `scorer` on `groups` with the given targets.
EpochLoss evaluate_loss(const Scorer& scorer, std::span<const ProductGroup> groups,
                        const TrainConfig& config,
                        const std::optional<SmoothingPrior>& smoothing);

}  // namespace crank::prior
