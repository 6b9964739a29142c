#include "crank/data/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "crank/core/error.hpp"
#include "crank/core/rng.hpp"

namespace crank::data {
namespace {

constexpr std::uint64_t kWeightStream = 0x5eed'0001;
constexpr std::uint64_t kProductStreamBase = 0x1000'0000;

struct ProductDraft {
  std::size_t creatives = 0;
  std::uint32_t days = 0;
  std::vector<FeatureVector> features;
  std::vector<double> ctr;
  std::vector<std::vector<ImpressionRecord>> by_day;
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

FeatureVector draw_weights(const GeneratorConfig& c) {
  core::SeededRng rng(c.seed, kWeightStream);
  FeatureVector w(c.dim);
  for (Eigen::Index i = 0; i < c.dim; ++i) w(i) = rng.normal();
  const double norm = w.norm();
  if (norm > 0.0) w *= c.signal_sd * std::sqrt(static_cast<double>(c.dim)) / (c.feature_scale * norm);
  return w;
}

void plant_ratio(std::vector<double>& ctr, double ratio) {
  std::vector<double> logs(ctr.size());
  std::transform(ctr.begin(), ctr.end(), logs.begin(), [](double v) { return std::log(v); });
  const auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
  const double spread = *hi - *lo;
  const double centre = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size());
  const double target = std::log(ratio);
  for (std::size_t m = 0; m < ctr.size(); ++m) {
    // Equal CTRs carry no ordering; spread them evenly by index instead.
    const double pos = spread > 0.0 ? (logs[m] - centre) / spread
                                    : static_cast<double>(m) / static_cast<double>(ctr.size() - 1) - 0.5;
    ctr[m] = std::exp(centre + pos * target);
  }
}

ProductDraft draft_product(const GeneratorConfig& c, const FeatureVector& w, std::size_t n) {
  core::SeededRng rng = core::SeededRng(c.seed).derive(kProductStreamBase + n);
  ProductDraft p;
  const std::size_t extra_cap = c.max_creatives - c.min_creatives;
  const double extra_mean = c.mean_creatives - static_cast<double>(c.min_creatives);
  std::size_t extra = extra_mean > 0.0 ? rng.poisson(extra_mean) : 0;
  p.creatives = c.min_creatives + std::min(extra, extra_cap);
  p.days = c.min_days + static_cast<std::uint32_t>(rng.index(c.max_days - c.min_days + 1));

  const double coord_sd = c.feature_scale / std::sqrt(static_cast<double>(c.dim));
  const double product_effect = c.product_logit_sd * rng.normal();
  FeatureVector wn = w;
  if (c.product_weight_sd > 0.0) {
    const double sd = c.product_weight_sd * w.norm() / std::sqrt(static_cast<double>(c.dim));
    for (Eigen::Index i = 0; i < c.dim; ++i) wn(i) += sd * rng.normal();
  }
  for (std::size_t m = 0; m < p.creatives; ++m) {
    FeatureVector f(c.dim);
    for (Eigen::Index i = 0; i < c.dim; ++i) f(i) = coord_sd * rng.normal();
    const double offset = c.offset_sd * rng.normal();
    const double logit = c.base_logit + product_effect + f.dot(wn) + offset;
    p.ctr.push_back(c.ctr_ceiling * sigmoid(logit));
    p.features.push_back(std::move(f));
  }
  if (c.planted_ratio) plant_ratio(p.ctr, *c.planted_ratio);
  for (double& v : p.ctr) v = std::clamp(v, c.ctr_floor, c.ctr_ceiling);

  p.by_day.resize(p.days);
  for (std::uint32_t day = 0; day < p.days; ++day) {
    const std::uint64_t shown = rng.poisson(c.impressions_per_day);
    auto& out = p.by_day[day];
    out.reserve(shown);
    for (std::uint64_t k = 0; k < shown; ++k) {
      const std::size_t m = rng.index(p.creatives);
      out.push_back(ImpressionRecord{product_name(n), creative_name(n, m), day,
                                     static_cast<std::uint8_t>(rng.bernoulli(p.ctr[m]) ? 1 : 0)});
    }
  }
  return p;
}

}  // namespace

void GeneratorConfig::validate() const {
  auto bad = [](const std::string& msg) { fail(Errc::InvalidConfig, msg); };
  if (products == 0) bad("products must be at least 1");
  if (min_creatives < 2) bad("min_creatives must be at least 2");
  if (max_creatives < min_creatives) bad("max_creatives must be >= min_creatives");
  if (!(mean_creatives >= static_cast<double>(min_creatives) &&
        mean_creatives <= static_cast<double>(max_creatives))) {
    bad("mean_creatives must lie in [min_creatives, max_creatives]");
  }
  if (dim < 1) bad("dim must be at least 1");
  if (true_weights && true_weights->size() != dim) bad("true_weights dimension differs from dim");
  if (!(feature_scale > 0.0)) bad("feature_scale must be positive");
  if (!(signal_sd >= 0.0) || !(offset_sd >= 0.0) || !(product_logit_sd >= 0.0) ||
      !(product_weight_sd >= 0.0)) {
    bad("standard deviations must be nonnegative");
  }
  if (!std::isfinite(base_logit)) bad("base_logit must be finite");
  if (!(ctr_floor > 0.0 && ctr_floor < ctr_ceiling && ctr_ceiling <= 1.0)) {
    bad("need 0 < ctr_floor < ctr_ceiling <= 1");
  }
  if (planted_ratio && !(*planted_ratio >= 1.0 && std::isfinite(*planted_ratio))) {
    bad("planted_ratio must be >= 1");
  }
  if (min_days < 5 || max_days > 14 || min_days > max_days) bad("days must lie within [5, 14]");
  if (!(impressions_per_day > 0.0)) bad("impressions_per_day must be positive");
}

std::string product_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%06zu", index);
  return buf;
}

std::string creative_name(std::size_t product_index, std::size_t creative_index) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "p%06zu_c%02zu", product_index, creative_index);
  return buf;
}

GeneratedData generate(const GeneratorConfig& config) {
  config.validate();
  GeneratedData out;
  out.true_weights = config.true_weights ? *config.true_weights : draw_weights(config);
  out.features = FeatureTable(config.dim);

  std::vector<ProductDraft> drafts;
  drafts.reserve(config.products);
  std::uint32_t horizon = 0;
  for (std::size_t n = 0; n < config.products; ++n) {
    drafts.push_back(draft_product(config, out.true_weights, n));
    horizon = std::max(horizon, drafts.back().days);
  }
  for (std::size_t n = 0; n < drafts.size(); ++n) {
    for (std::size_t m = 0; m < drafts[n].creatives; ++m) {
      out.features.add(creative_name(n, m), drafts[n].features[m]);
      out.truth.push_back(GroundTruthRow{product_name(n), creative_name(n, m), drafts[n].ctr[m]});
    }
  }
  for (std::uint32_t day = 0; day < horizon; ++day) {
    for (auto& p : drafts) {
      if (day >= p.days) continue;
      auto& records = p.by_day[day];
      std::move(records.begin(), records.end(), std::back_inserter(out.log));
      records.clear();
      records.shrink_to_fit();
    }
  }
  return out;
}

}  // namespace crank::data
