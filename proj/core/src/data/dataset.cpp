#include "crank/data/dataset.hpp"

#include <unordered_set>

#include "crank/core/error.hpp"

namespace crank::data {

void FeatureTable::add(std::string creative_id, FeatureVector features) {
  if (ids_.empty() && dim_ == 0) dim_ = features.size();
  if (features.size() != dim_) {
    fail(Errc::PreconditionViolated, "feature vector for " + creative_id + " has dimension " +
                                         std::to_string(features.size()) + ", table has " +
                                         std::to_string(dim_));
  }
  if (!features.allFinite()) {
    fail(Errc::PreconditionViolated, "feature vector for " + creative_id + " is not finite");
  }
  if (index_.contains(creative_id)) {
    fail(Errc::PreconditionViolated, "duplicate feature vector for " + creative_id);
  }
  index_.emplace(creative_id, ids_.size());
  ids_.push_back(std::move(creative_id));
  vectors_.push_back(std::move(features));
}

const FeatureVector* FeatureTable::find(std::string_view creative_id) const {
  auto it = index_.find(std::string(creative_id));
  return it == index_.end() ? nullptr : &vectors_[it->second];
}

const FeatureVector& FeatureTable::at(std::string_view creative_id) const {
  const FeatureVector* f = find(creative_id);
  if (f == nullptr) {
    fail(Errc::MissingFeatures, "no feature vector for creative " + std::string(creative_id));
  }
  return *f;
}

bool FeatureTable::operator==(const FeatureTable& other) const {
  if (dim_ != other.dim_ || ids_ != other.ids_) return false;
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (vectors_[i] != other.vectors_[i]) return false;
  }
  return true;
}

Dataset Dataset::build(std::span<const ImpressionRecord> log, const FeatureTable& features) {
  Dataset ds;
  ds.dim_ = features.dim();
  std::unordered_map<std::string, std::uint32_t> product_index;
  std::unordered_map<std::string, std::uint32_t> creative_index;
  std::vector<std::unordered_set<std::uint32_t>> seen;
  for (const auto& r : log) {
    auto [pit, new_product] =
        product_index.try_emplace(r.product_id, static_cast<std::uint32_t>(ds.products_.size()));
    if (new_product) {
      ds.products_.push_back(ProductLog{ProductId{pit->second}, r.product_id, {}, {}});
      seen.emplace_back();
    }
    auto [cit, new_creative] = creative_index.try_emplace(
        r.creative_id, static_cast<std::uint32_t>(ds.creative_names_.size()));
    if (new_creative) {
      ds.creative_features_.push_back(features.at(r.creative_id));
      ds.creative_names_.push_back(r.creative_id);
    }
    ProductLog& p = ds.products_[pit->second];
    const CreativeId cid{cit->second};
    if (seen[pit->second].insert(cid.value).second) p.candidates.push_back(cid);
    p.events.push_back(Event{cid, r.day, r.click});
  }
  return ds;
}

std::size_t Dataset::impression_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : products_) n += p.events.size();
  return n;
}

std::vector<ImpressionRecord> filter_products(std::span<const ImpressionRecord> log,
                                              std::span<const std::string> products) {
  const std::unordered_set<std::string> keep(products.begin(), products.end());
  std::vector<ImpressionRecord> out;
  for (const auto& r : log) {
    if (keep.contains(r.product_id)) out.push_back(r);
  }
  return out;
}

std::vector<prior::ProductGroup> aggregate_groups(std::span<const ImpressionRecord> log,
                                                  const FeatureTable& features) {
  std::vector<prior::ProductGroup> groups;
  std::unordered_map<std::string, std::size_t> product_index;
  std::vector<std::unordered_map<std::string, std::size_t>> creative_index;
  for (const auto& r : log) {
    auto [pit, new_product] = product_index.try_emplace(r.product_id, groups.size());
    if (new_product) {
      groups.push_back(prior::ProductGroup{r.product_id, {}});
      creative_index.emplace_back();
    }
    auto& g = groups[pit->second];
    auto [cit, new_creative] = creative_index[pit->second].try_emplace(r.creative_id, g.creatives.size());
    if (new_creative) {
      g.creatives.push_back(prior::CreativeStats{r.creative_id, features.at(r.creative_id), 0, 0});
    }
    auto& c = g.creatives[cit->second];
    ++c.impressions;
    c.clicks += r.click;
  }
  std::erase_if(groups, [](const prior::ProductGroup& g) { return g.creatives.size() < 2; });
  return groups;
}

}  // namespace crank::data
