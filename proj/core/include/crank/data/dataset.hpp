#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "crank/bandit/policy.hpp"
#include "crank/core/linalg.hpp"
#include "crank/prior/train.hpp"

namespace crank::data {

/// One logged display: which creative of which product was shown on which
/// day of the product's lifetime, and whether it was clicked.
struct ImpressionRecord {
  std::string product_id;
  std::string creative_id;
  std::uint32_t day = 0;
  std::uint8_t click = 0;

  bool operator==(const ImpressionRecord&) const = default;
};

/// creative id → feature vector, all of one dimension.
class FeatureTable {
 public:
  explicit FeatureTable(Eigen::Index dim = 0) : dim_(dim) {}

  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  /// Insertion order.
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// Throws on dimension mismatch, duplicate id or non-finite entries. The
  /// first insertion fixes the dimension of an empty table.
  void add(std::string creative_id, FeatureVector features);

  const FeatureVector* find(std::string_view creative_id) const;
  /// Throws Errc::MissingFeatures naming the id.
  const FeatureVector& at(std::string_view creative_id) const;

  bool operator==(const FeatureTable& other) const;

 private:
  Eigen::Index dim_;
  std::vector<std::string> ids_;
  std::vector<FeatureVector> vectors_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct GroundTruthRow {
  std::string product_id;
  std::string creative_id;
  double true_ctr = 0.0;

  bool operator==(const GroundTruthRow&) const = default;
};

struct Event {
  CreativeId creative;
  std::uint32_t day = 0;
  std::uint8_t click = 0;
};

struct ProductLog {
  ProductId id;
  std::string name;
  /// Distinct creatives in order of first appearance in the log.
  std::vector<CreativeId> candidates;
  /// Logged order.
  std::vector<Event> events;
};

/// Interned impression log: products in order of first appearance, ready
/// for replay. Every creative has a feature vector.
class Dataset {
 public:
  /// Throws Errc::MissingFeatures naming the first creative without features.
  static Dataset build(std::span<const ImpressionRecord> log, const FeatureTable& features);

  const std::vector<ProductLog>& products() const noexcept { return products_; }
  std::size_t creative_count() const noexcept { return creative_names_.size(); }
  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t impression_count() const noexcept;

  const std::string& creative_name(CreativeId id) const { return creative_names_.at(id.value); }
  const FeatureVector& features(CreativeId id) const { return creative_features_.at(id.value); }

  /// Replaces every feature vector by f ↦ transform(f) (e.g. a scorer embedding).
  template <typename Fn>
  void transform_features(Fn&& transform) {
    for (auto& f : creative_features_) f = transform(f);
    if (!creative_features_.empty()) dim_ = creative_features_.front().size();
  }

 private:
  Eigen::Index dim_ = 0;
  std::vector<ProductLog> products_;
  std::vector<std::string> creative_names_;
  std::vector<FeatureVector> creative_features_;
};

/// Keeps the records whose product id is in `products`.
std::vector<ImpressionRecord> filter_products(std::span<const ImpressionRecord> log,
                                              std::span<const std::string> products);

/// Per-creative click and impression totals grouped by product, for prior
/// training. Products with fewer than two creatives are dropped.
std::vector<prior::ProductGroup> aggregate_groups(std::span<const ImpressionRecord> log,
                                                  const FeatureTable& features);

}  // namespace crank::data
