#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "crank/data/dataset.hpp"

namespace crank::data {

/// Synthetic creative-ranking log. Each creative's true CTR is
///   clip(ctr_ceiling · sigmoid(base_logit + u_n + fᵀw_n + δ_m), ctr_floor, ctr_ceiling)
/// with a product effect u_n ~ N(0, product_logit_sd²), product weights
/// w_n = w* + product_weight_sd · ‖w*‖/√d · z_n (z_n standard normal) and a
/// creative offset δ_m ~ N(0, offset_sd²). Every impression shows a
/// candidate chosen uniformly at random.
struct GeneratorConfig {
  std::size_t products = 1000;
  std::size_t min_creatives = 3;
  double mean_creatives = 3.4;
  std::size_t max_creatives = 11;
  Eigen::Index dim = 8;
  /// Feature entries are N(0, feature_scale² / d), so ‖f‖ ≈ feature_scale.
  double feature_scale = 0.1;
  /// Ground-truth weights. When unset they are drawn from a seeded stream and
  /// scaled so that fᵀw* has standard deviation signal_sd.
  std::optional<FeatureVector> true_weights;
  double signal_sd = 1.5;
  /// How far each product's weights stray from w*, relative to ‖w*‖.
  double product_weight_sd = 1.2;
  double offset_sd = 0.8;
  double product_logit_sd = 0.5;
  double base_logit = -1.6;
  double ctr_floor = 0.001;
  double ctr_ceiling = 0.2;
  /// When set, each product's CTRs are stretched in log space so that
  /// best / worst equals this ratio (geometric mean preserved).
  std::optional<double> planted_ratio;
  std::uint32_t min_days = 5;
  std::uint32_t max_days = 14;
  double impressions_per_day = 40.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GeneratedData {
  /// Day-major: all of day 0 across products, then day 1, and so on;
  /// product order within a day.
  std::vector<ImpressionRecord> log;
  FeatureTable features;
  std::vector<GroundTruthRow> truth;
  FeatureVector true_weights;
};

GeneratedData generate(const GeneratorConfig& config);

std::string product_name(std::size_t index);
std::string creative_name(std::size_t product_index, std::size_t creative_index);

}  // namespace crank::data
