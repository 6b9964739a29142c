#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "crank/core/error.hpp"
#include "crank/data/dataset.hpp"
#include "crank/data/generator.hpp"
#include "crank/data/io.hpp"
#include "crank/data/split.hpp"

namespace crank::data {
namespace {

Errc error_code(const std::function<void()>& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::IoError;
}

struct Tally {
  std::uint64_t impressions = 0;
  std::uint64_t clicks = 0;
};

std::map<std::string, Tally> tally(const std::vector<ImpressionRecord>& log) {
  std::map<std::string, Tally> t;
  for (const auto& r : log) {
    auto& x = t[r.creative_id];
    ++x.impressions;
    x.clicks += r.click;
  }
  return t;
}

GeneratorConfig small_config() {
  GeneratorConfig c;
  c.products = 600;
  c.seed = 3;
  return c;
}

TEST(Generator, StructuralInvariants) {
  const auto cfg = small_config();
  const auto g = generate(cfg);
  std::map<std::string, std::size_t> creatives;
  for (const auto& row : g.truth) {
    ++creatives[row.product_id];
    EXPECT_GE(row.true_ctr, cfg.ctr_floor);
    EXPECT_LE(row.true_ctr, cfg.ctr_ceiling);
    ASSERT_NE(g.features.find(row.creative_id), nullptr);
  }
  EXPECT_EQ(creatives.size(), cfg.products);
  double mean = 0.0;
  for (const auto& [p, m] : creatives) {
    EXPECT_GE(m, cfg.min_creatives);
    EXPECT_LE(m, cfg.max_creatives);
    mean += static_cast<double>(m);
  }
  mean /= static_cast<double>(creatives.size());
  // Count is 3 + Poisson(0.4): sd of the mean ≈ √0.4/√600 ≈ 0.026.
  EXPECT_NEAR(mean, cfg.mean_creatives, 0.1);

  std::map<std::string, std::set<std::uint32_t>> days;
  std::uint32_t prev_day = 0;
  for (const auto& r : g.log) {
    EXPECT_GE(r.day, prev_day);  // day-major order
    prev_day = r.day;
    days[r.product_id].insert(r.day);
  }
  for (const auto& [p, d] : days) {
    EXPECT_LE(*d.rbegin() + 1, cfg.max_days);
    EXPECT_GE(d.size() + 0, 1u);
  }
  EXPECT_EQ(g.features.dim(), cfg.dim);
  EXPECT_EQ(product_name(12), "p000012");
  EXPECT_EQ(creative_name(12, 3), "p000012_c03");
}

TEST(Generator, DeterministicPerSeed) {
  const auto a = generate(small_config());
  const auto b = generate(small_config());
  EXPECT_EQ(a.log, b.log);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_TRUE(a.features == b.features);
  auto other = small_config();
  other.seed = 4;
  EXPECT_NE(generate(other).truth, a.truth);
}

TEST(Generator, LoggingPolicyIsUniform) {
  auto cfg = small_config();
  cfg.impressions_per_day = 20;
  const auto g = generate(cfg);
  std::map<std::string, std::map<std::string, double>> counts;
  for (const auto& r : g.log) counts[r.product_id][r.creative_id] += 1.0;
  std::map<std::string, std::size_t> arms;
  for (const auto& row : g.truth) ++arms[row.product_id];

  std::size_t tested = 0, rejected = 0;
  for (const auto& [p, per] : counts) {
    double n = 0.0;
    for (const auto& [c, k] : per) n += k;
    if (n < 100.0) continue;
    const double m = static_cast<double>(arms[p]);
    double chi2 = 0.0;
    for (const auto& [c, k] : per) chi2 += (k - n / m) * (k - n / m) / (n / m);
    chi2 += (m - static_cast<double>(per.size())) * n / m;  // unseen arms
    const boost::math::chi_squared dist(m - 1.0);
    if (boost::math::cdf(boost::math::complement(dist, chi2)) <= 0.001) ++rejected;
    ++tested;
  }
  ASSERT_GT(tested, 300u);
  // At the 0.001 level about tested/1000 rejections are expected by chance.
  EXPECT_LE(rejected, 3u);
}

TEST(Generator, EmpiricalCtrMatchesTruth) {
  auto cfg = small_config();
  cfg.impressions_per_day = 200;
  const auto g = generate(cfg);
  const auto t = tally(g.log);
  std::size_t outside = 0;
  for (const auto& row : g.truth) {
    const auto& x = t.at(row.creative_id);
    const double n = static_cast<double>(x.impressions);
    const double se = std::sqrt(row.true_ctr * (1.0 - row.true_ctr) / n);
    if (std::abs(static_cast<double>(x.clicks) / n - row.true_ctr) > 3.0 * se) ++outside;
  }
  // Expected ≈ 0.27% of creatives outside 3 SE.
  EXPECT_LT(static_cast<double>(outside), 0.01 * static_cast<double>(g.truth.size()));
}

TEST(Generator, PlantedRatioIsRecovered) {
  GeneratorConfig cfg;
  cfg.products = 6;
  cfg.min_creatives = 3;
  cfg.mean_creatives = 3.0;
  cfg.max_creatives = 3;
  cfg.min_days = cfg.max_days = 10;
  cfg.impressions_per_day = 3e4;  // ≈ 1e5 impressions per creative
  cfg.planted_ratio = 3.0;
  // CTRs near 0.25 keep the sampling error of each ratio around 2%.
  cfg.base_logit = 0.0;
  cfg.product_logit_sd = 0.0;
  cfg.ctr_ceiling = 0.5;
  const auto g = generate(cfg);
  const auto t = tally(g.log);
  struct Range {
    double lo = 1.0, hi = 0.0, true_lo = 1.0, true_hi = 0.0;
  };
  std::map<std::string, Range> range;
  for (const auto& row : g.truth) {
    const auto& x = t.at(row.creative_id);
    const double ctr = static_cast<double>(x.clicks) / static_cast<double>(x.impressions);
    auto& r = range[row.product_id];
    r.lo = std::min(r.lo, ctr);
    r.hi = std::max(r.hi, ctr);
    r.true_lo = std::min(r.true_lo, row.true_ctr);
    r.true_hi = std::max(r.true_hi, row.true_ctr);
  }
  std::size_t exact = 0;
  for (const auto& [p, r] : range) {
    // Clipping to [ctr_floor, ctr_ceiling] can only shrink the planted ratio.
    const double planted = r.true_hi / r.true_lo;
    EXPECT_LE(planted, 3.0 + 1e-9) << p;
    if (std::abs(planted - 3.0) < 1e-9) ++exact;
    EXPECT_NEAR(r.hi / r.lo, planted, 0.1 * planted) << p;
  }
  EXPECT_GE(exact, 3u);
}

TEST(Generator, TruthOrderFollowsScoresWithoutNoise) {
  GeneratorConfig cfg;
  cfg.products = 300;
  cfg.offset_sd = 0.0;
  cfg.product_weight_sd = 0.0;
  cfg.impressions_per_day = 1;
  const auto g = generate(cfg);
  std::map<std::string, std::vector<const GroundTruthRow*>> by_product;
  for (const auto& row : g.truth) by_product[row.product_id].push_back(&row);
  for (const auto& [p, rows] : by_product) {
    std::size_t best_truth = 0, best_score = 0;
    for (std::size_t m = 1; m < rows.size(); ++m) {
      if (rows[m]->true_ctr > rows[best_truth]->true_ctr) best_truth = m;
      if (g.features.at(rows[m]->creative_id).dot(g.true_weights) >
          g.features.at(rows[best_score]->creative_id).dot(g.true_weights)) {
        best_score = m;
      }
    }
    EXPECT_EQ(best_truth, best_score) << p;
  }
}

TEST(Generator, RejectsInvalidConfig) {
  auto bad = [](auto mutate) {
    GeneratorConfig c;
    mutate(c);
    return error_code([&] { c.validate(); });
  };
  EXPECT_EQ(bad([](GeneratorConfig& c) { c.products = 0; }), Errc::InvalidConfig);
  EXPECT_EQ(bad([](GeneratorConfig& c) { c.min_creatives = 1; }), Errc::InvalidConfig);
  EXPECT_EQ(bad([](GeneratorConfig& c) { c.mean_creatives = 20; }), Errc::InvalidConfig);
  EXPECT_EQ(bad([](GeneratorConfig& c) { c.min_days = 4; }), Errc::InvalidConfig);
  EXPECT_EQ(bad([](GeneratorConfig& c) { c.planted_ratio = 0.5; }), Errc::InvalidConfig);
  EXPECT_EQ(bad([](GeneratorConfig& c) { c.true_weights = FeatureVector::Ones(3); }),
            Errc::InvalidConfig);
}

TEST(FeatureTable, EnforcesDimensionAndUniqueness) {
  FeatureTable t;
  t.add("a", FeatureVector::Ones(3));
  EXPECT_EQ(t.dim(), 3);
  EXPECT_EQ(error_code([&] { t.add("b", FeatureVector::Ones(2)); }), Errc::PreconditionViolated);
  EXPECT_EQ(error_code([&] { t.add("a", FeatureVector::Ones(3)); }), Errc::PreconditionViolated);
  FeatureVector nan = FeatureVector::Ones(3);
  nan(1) = std::nan("");
  EXPECT_EQ(error_code([&] { t.add("c", nan); }), Errc::PreconditionViolated);
  std::string msg;
  EXPECT_EQ(error_code([&] { t.at("zzz"); }, &msg), Errc::MissingFeatures);
  EXPECT_NE(msg.find("zzz"), std::string::npos);
  EXPECT_EQ(t.find("zzz"), nullptr);
}

TEST(ImpressionIo, RoundTrip) {
  const auto g = generate(small_config());
  std::stringstream s;
  write_impressions(s, g.log);
  EXPECT_EQ(read_impressions(s), g.log);
}

TEST(ImpressionIo, ColumnMappingAndExtraColumns) {
  std::istringstream in("ts,item,ad,d,clk\n9,A,a1,0,1\n9,A,a2,3,0\n");
  ImpressionColumns cols{"item", "ad", "d", "clk"};
  const auto log = read_impressions(in, cols);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0], (ImpressionRecord{"A", "a1", 0, 1}));
  EXPECT_EQ(log[1], (ImpressionRecord{"A", "a2", 3, 0}));
}

TEST(ImpressionIo, EmptyInputIsEmptyLog) {
  std::istringstream empty("");
  EXPECT_TRUE(read_impressions(empty).empty());
  std::istringstream header_only("product_id,creative_id,day,click\n");
  EXPECT_TRUE(read_impressions(header_only).empty());
}

TEST(ImpressionIo, ErrorsCarryLineNumbers) {
  std::string msg;
  std::istringstream bad_click("product_id,creative_id,day,click\np,c,0,1\np,c,0,2\n");
  EXPECT_EQ(error_code([&] { read_impressions(bad_click); }, &msg), Errc::InvalidClick);
  EXPECT_EQ(msg.rfind("line 3: ", 0), 0u) << msg;

  std::istringstream bad_day("product_id,creative_id,day,click\np,c,x,1\n");
  EXPECT_EQ(error_code([&] { read_impressions(bad_day); }, &msg), Errc::ParseError);
  EXPECT_EQ(msg.rfind("line 2: ", 0), 0u) << msg;

  std::istringstream short_row("product_id,creative_id,day,click\np,c,1\n");
  EXPECT_EQ(error_code([&] { read_impressions(short_row); }, &msg), Errc::ParseError);

  std::istringstream no_click("product_id,creative_id,day\np,c,1\n");
  EXPECT_EQ(error_code([&] { read_impressions(no_click); }, &msg), Errc::ParseError);
  EXPECT_NE(msg.find("click"), std::string::npos);
}

TEST(FeatureIo, RoundTripIsExact) {
  FeatureTable t;
  FeatureVector f(3);
  f << 0.1, -1e-300, 1.0 / 3.0;
  t.add("x\"y", f);
  t.add("z", FeatureVector::Zero(3));
  std::stringstream s;
  write_features(s, t);
  EXPECT_TRUE(read_features(s) == t);
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(FeatureIo, MalformedLines) {
  std::string msg;
  std::istringstream bad("{\"creative_id\":\"a\",\"vector\":[1]}\n\n{\"creative_id\":\"b\"}\n");
  EXPECT_EQ(error_code([&] { read_features(bad); }, &msg), Errc::ParseError);
  EXPECT_EQ(msg.rfind("line 3: ", 0), 0u) << msg;
  std::istringstream dim("{\"creative_id\":\"a\",\"vector\":[1]}\n{\"creative_id\":\"b\",\"vector\":[1,2]}\n");
  EXPECT_EQ(error_code([&] { read_features(dim); }), Errc::ParseError);
  std::istringstream text("{\"creative_id\":\"a\",\"vector\":[\"x\"]}\n");
  EXPECT_EQ(error_code([&] { read_features(text); }), Errc::ParseError);
}

TEST(GroundTruthIo, RoundTrip) {
  const auto g = generate(small_config());
  const auto path = std::filesystem::temp_directory_path() / "crank_truth_test" / "t.csv";
  write_ground_truth(path, g.truth);
  EXPECT_EQ(load_ground_truth(path), g.truth);
  std::filesystem::remove_all(path.parent_path());
}

TEST(Dataset, BuildInternsProductsAndCreatives) {
  FeatureTable t;
  t.add("a", FeatureVector::Ones(2));
  t.add("b", FeatureVector::Zero(2));
  t.add("c", FeatureVector::Constant(2, 2.0));
  const std::vector<ImpressionRecord> log{
      {"P", "b", 0, 1}, {"Q", "c", 0, 0}, {"P", "a", 0, 0}, {"P", "b", 1, 0}};
  const auto d = Dataset::build(log, t);
  ASSERT_EQ(d.products().size(), 2u);
  EXPECT_EQ(d.products()[0].name, "P");
  ASSERT_EQ(d.products()[0].candidates.size(), 2u);
  EXPECT_EQ(d.creative_name(d.products()[0].candidates[0]), "b");
  EXPECT_EQ(d.products()[0].events.size(), 3u);
  EXPECT_EQ(d.products()[0].events[2].day, 1u);
  EXPECT_EQ(d.impression_count(), 4u);
  EXPECT_EQ(d.features(d.products()[1].candidates[0]), FeatureVector::Constant(2, 2.0));
}

TEST(Dataset, MissingFeaturesNamesCreative) {
  FeatureTable t;
  t.add("a", FeatureVector::Ones(2));
  const std::vector<ImpressionRecord> log{{"P", "a", 0, 1}, {"P", "ghost", 0, 0}};
  std::string msg;
  EXPECT_EQ(error_code([&] { Dataset::build(log, t); }, &msg), Errc::MissingFeatures);
  EXPECT_NE(msg.find("ghost"), std::string::npos);
  EXPECT_EQ(error_code([&] { check_references(log, t); }), Errc::MissingFeatures);
}

TEST(Dataset, FilterAndAggregate) {
  FeatureTable t;
  for (const char* id : {"a", "b", "c"}) t.add(id, FeatureVector::Ones(1));
  const std::vector<ImpressionRecord> log{
      {"P", "a", 0, 1}, {"P", "b", 0, 0}, {"P", "a", 1, 0}, {"Q", "c", 0, 1}};
  const std::vector<std::string> keep{"P"};
  EXPECT_EQ(filter_products(log, keep).size(), 3u);
  const auto groups = aggregate_groups(log, t);
  ASSERT_EQ(groups.size(), 1u);  // Q has a single creative
  EXPECT_EQ(groups[0].product_id, "P");
  EXPECT_EQ(groups[0].impressions(), 3u);
  EXPECT_EQ(groups[0].creatives[0].clicks, 1u);
}

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(product_name(i));
  return v;
}

TEST(Split, SizesFollowLargestRemainder) {
  const auto p = names(10);
  const auto r = split(p, {}, 1);
  EXPECT_EQ(r.train.size(), 6u);
  EXPECT_EQ(r.validation.size(), 2u);
  EXPECT_EQ(r.test.size(), 2u);
  const auto odd = split(names(7), {}, 1);  // 4.2 / 1.4 / 1.4
  EXPECT_EQ(odd.train.size(), 4u);
  EXPECT_EQ(odd.validation.size(), 2u);
  EXPECT_EQ(odd.test.size(), 1u);
  const auto all = split(p, {1.0, 0.0, 0.0}, 1);
  EXPECT_EQ(all.train, p);
  EXPECT_TRUE(all.test.empty());
}

TEST(Split, PartitionDeterministicAndOrdered) {
  const auto p = names(101);
  const auto a = split(p, {}, 5);
  const auto b = split(p, {}, 5);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  std::set<std::string> seen;
  for (const auto* set : {&a.train, &a.validation, &a.test}) {
    EXPECT_TRUE(std::is_sorted(set->begin(), set->end()));
    for (const auto& x : *set) EXPECT_TRUE(seen.insert(x).second);
  }
  EXPECT_EQ(seen.size(), p.size());
  EXPECT_NE(split(p, {}, 6).test, a.test);
}

TEST(Split, RejectsBadFractions) {
  const auto p = names(5);
  EXPECT_EQ(error_code([&] { split(p, {0.5, 0.5, 0.5}, 0); }), Errc::InvalidConfig);
  EXPECT_EQ(error_code([&] { split(p, {1.2, -0.1, -0.1}, 0); }), Errc::InvalidConfig);
}

TEST(Split, FileRoundTrip) {
  const auto r = split(names(20), {}, 2);
  const auto path = std::filesystem::temp_directory_path() / "crank_split_test" / "splits.csv";
  write_split(path, r);
  const auto back = load_split(path);
  EXPECT_EQ(back.train, r.train);
  EXPECT_EQ(back.validation, r.validation);
  EXPECT_EQ(back.test, r.test);
  std::filesystem::remove_all(path.parent_path());
}

}  // namespace
}  // namespace crank::data
