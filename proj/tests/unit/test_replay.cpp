#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <map>

#include "crank/bandit/policies.hpp"
#include "crank/core/error.hpp"
#include "crank/data/generator.hpp"
#include "crank/replay/replay.hpp"
#include "crank/replay/report_io.hpp"

namespace crank::replay {
namespace {

Errc error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::IoError;
}

// Always plays the named creative when it is a candidate, else the first one.
class FixedPolicy final : public bandit::Policy {
 public:
  FixedPolicy(CreativeId target, std::size_t* observed) : target_(target), observed_(observed) {}
  std::string_view kind() const noexcept override { return "fixed"; }
  CreativeId choose(const bandit::ProductView& v, core::SeededRng&) override {
    for (const auto& c : v.candidates) {
      if (c.id == target_) return target_;
    }
    return v.candidates.front().id;
  }
  void observe(const bandit::ProductView&, CreativeId, const FeatureVector&, double) override {
    if (observed_) ++*observed_;
  }
  bool separable() const noexcept override { return false; }

 private:
  CreativeId target_;
  std::size_t* observed_;
};

// Returns an id that is never a candidate, so nothing ever matches.
class NeverPolicy final : public bandit::Policy {
 public:
  std::string_view kind() const noexcept override { return "never"; }
  CreativeId choose(const bandit::ProductView&, core::SeededRng&) override {
    return CreativeId{0xffffffffu};
  }
  void observe(const bandit::ProductView&, CreativeId, const FeatureVector&, double) override {}
  bool separable() const noexcept override { return true; }
};

data::Dataset hand_dataset(const std::vector<data::ImpressionRecord>& log) {
  data::FeatureTable t;
  for (const auto& r : log) {
    if (!t.find(r.creative_id)) t.add(r.creative_id, FeatureVector::Ones(2));
  }
  return data::Dataset::build(log, t);
}

std::vector<data::ImpressionRecord> repeat(const std::string& p, const std::string& c,
                                           int imps, int clicks, std::uint32_t day = 0) {
  std::vector<data::ImpressionRecord> v;
  for (int i = 0; i < imps; ++i) v.push_back({p, c, day, static_cast<std::uint8_t>(i < clicks)});
  return v;
}

std::vector<data::ImpressionRecord> concat(std::initializer_list<std::vector<data::ImpressionRecord>> parts) {
  std::vector<data::ImpressionRecord> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

data::Dataset generated(std::size_t products, std::uint64_t seed) {
  data::GeneratorConfig cfg;
  cfg.products = products;
  cfg.seed = seed;
  const auto g = data::generate(cfg);
  return data::Dataset::build(g.log, g.features);
}

PolicyFactory factory_of(bandit::PolicyKind kind, bandit::PolicyConfig cfg = {}) {
  return [=] { return bandit::make_policy(kind, cfg); };
}

TEST(OracleCtr, PicksEmpiricalBestPerProduct) {
  const auto d = hand_dataset(concat({repeat("P", "a", 4, 1), repeat("P", "b", 4, 3),
                                      repeat("Q", "c", 2, 0), repeat("Q", "d", 2, 1)}));
  EXPECT_DOUBLE_EQ(oracle_ctr(d), 4.0 / 6.0);
}

TEST(OracleCtr, IdenticalCtrsGiveTheMean) {
  const auto d = hand_dataset(concat({repeat("P", "a", 10, 2), repeat("P", "b", 5, 1),
                                      repeat("Q", "c", 20, 4), repeat("Q", "d", 10, 2)}));
  EXPECT_DOUBLE_EQ(oracle_ctr(d), 0.2);
}

TEST(OracleCtr, EmptyDatasetThrows) {
  const data::Dataset d = hand_dataset({});
  EXPECT_EQ(error_code([&] { oracle_ctr(d); }), Errc::EmptyDataset);
  EXPECT_EQ(error_code([&] { replay(factory_of(bandit::PolicyKind::Uniform), d, {}); }),
            Errc::EmptyDataset);
}

TEST(Replay, CountsOnlyMatchingEventsAndFeedsThemBack) {
  const auto d = hand_dataset(concat({repeat("P", "a", 4, 1), repeat("P", "b", 4, 3, 1),
                                      repeat("P", "a", 2, 2, 1)}));
  const CreativeId b = d.products()[0].candidates[1];
  std::size_t observed = 0;
  const auto r = replay([&] { return std::make_unique<FixedPolicy>(b, &observed); }, d, {});
  EXPECT_EQ(r.logged_impressions, 10u);
  EXPECT_EQ(r.matched_impressions, 4u);
  EXPECT_EQ(r.matched_clicks, 3u);
  EXPECT_EQ(observed, 4u);
  EXPECT_DOUBLE_EQ(*r.sctr, 0.75);
  ASSERT_EQ(r.curve.size(), 1u);
  EXPECT_EQ(r.curve[0].day, 1u);
  ASSERT_EQ(r.shares.size(), 1u);
  EXPECT_EQ(r.shares[0].creative, "b");
  EXPECT_DOUBLE_EQ(r.shares[0].share, 1.0);
  EXPECT_EQ(r.policy, "fixed");
}

TEST(Replay, PlayingTheOracleHasZeroRegret) {
  const auto d = hand_dataset(concat({repeat("P", "a", 4, 1), repeat("P", "b", 4, 3)}));
  const CreativeId b = d.products()[0].candidates[1];
  const auto r = replay([&] { return std::make_unique<FixedPolicy>(b, nullptr); }, d, {});
  EXPECT_DOUBLE_EQ(*r.sctr, r.oracle_ctr);
  EXPECT_DOUBLE_EQ(*r.regret, 0.0);
}

TEST(Replay, NeverMatchingPolicyReportsNoMatch) {
  const auto d = generated(20, 1);
  const auto r = replay([] { return std::make_unique<NeverPolicy>(); }, d, {});
  EXPECT_TRUE(r.no_match());
  EXPECT_FALSE(r.regret.has_value());
  EXPECT_EQ(r.products_without_match, 20u);
  EXPECT_TRUE(r.curve.empty());
  const auto u = replay(factory_of(bandit::PolicyKind::Uniform), d, {});
  EXPECT_EQ(error_code([&] { normalized_regret(r, u); }), Errc::NoMatches);
}

TEST(Replay, UniformMatchesLoggedMean) {
  const auto d = generated(3000, 2);
  std::uint64_t clicks = 0;
  for (const auto& p : d.products()) {
    for (const auto& e : p.events) clicks += e.click;
  }
  const double logged = static_cast<double>(clicks) / static_cast<double>(d.impression_count());
  const auto r = replay(factory_of(bandit::PolicyKind::Uniform), d, {.seed = 3});
  const double se = std::sqrt(logged * (1.0 - logged) / static_cast<double>(r.matched_impressions));
  EXPECT_NEAR(*r.sctr, logged, 3.0 * se);
  // Uniform over ~3.4 candidates matches about 1/3.4 of the log.
  EXPECT_NEAR(static_cast<double>(r.matched_impressions) / static_cast<double>(d.impression_count()),
              0.3, 0.05);
}

TEST(Replay, CurveAndSharesAreConsistent) {
  const auto d = generated(200, 4);
  const auto r = replay(factory_of(bandit::PolicyKind::BetaBernoulliTs), d, {.seed = 1});
  ASSERT_FALSE(r.curve.empty());
  EXPECT_DOUBLE_EQ(r.curve.back().cumulative_sctr, *r.sctr);
  std::uint64_t matched = 0;
  for (const auto& p : r.curve) matched += p.matched;
  EXPECT_EQ(matched, r.matched_impressions);
  std::map<std::pair<std::string, std::uint32_t>, double> total;
  for (const auto& s : r.shares) total[{s.product, s.day}] += s.share;
  for (const auto& [k, v] : total) EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_TRUE(replay(factory_of(bandit::PolicyKind::BetaBernoulliTs), d,
                     {.seed = 1, .record_shares = false})
                  .shares.empty());
}

TEST(Replay, DeterministicAndIndependentOfWorkers) {
  const auto d = generated(300, 5);
  bandit::PolicyConfig cfg;
  cfg.scope = bandit::PosteriorScope::Product;
  for (auto kind : {bandit::PolicyKind::Hbm, bandit::PolicyKind::LinThompson,
                    bandit::PolicyKind::EpsilonGreedy}) {
    const auto f = factory_of(kind, cfg);
    const auto one = replay(f, d, {.seed = 9, .workers = 1});
    const auto three = replay(f, d, {.seed = 9, .workers = 3});
    EXPECT_EQ(one, three) << bandit::policy_kind_name(kind);
    EXPECT_EQ(one, replay(f, d, {.seed = 9, .workers = 1}));
    EXPECT_NE(one.matched_impressions + one.matched_clicks * 1000,
              replay(f, d, {.seed = 10}).matched_impressions +
                  replay(f, d, {.seed = 10}).matched_clicks * 1000);
  }
  // A global posterior runs sequentially whatever the worker count.
  const auto g = factory_of(bandit::PolicyKind::LinThompson);
  EXPECT_EQ(replay(g, d, {.seed = 2, .workers = 1}), replay(g, d, {.seed = 2, .workers = 4}));
}

TEST(Replay, LabelOverridesKind) {
  const auto d = generated(10, 6);
  EXPECT_EQ(replay(factory_of(bandit::PolicyKind::Uniform), d, {.label = "u"}).policy, "u");
}

TEST(NormalizedRegret, Identities) {
  EvalReport u, r;
  u.sctr = 0.02;
  u.regret = 0.04;
  r.sctr = 0.05;
  r.regret = 0.01;
  EXPECT_DOUBLE_EQ(normalized_regret(u, u), 1.0);
  EXPECT_DOUBLE_EQ(normalized_regret(r, u), 0.25);
  u.regret = 0.0;
  EXPECT_EQ(error_code([&] { normalized_regret(r, u); }), Errc::DivisionByZero);
}

TEST(ReportIo, JsonRoundTripWithoutShares) {
  const auto d = generated(100, 7);
  auto r = replay(factory_of(bandit::PolicyKind::Hbm), d, {.seed = 4, .label = "hbm+x"});
  auto back = report_from_json(report_to_json(r));
  r.shares.clear();
  EXPECT_EQ(back, r);

  EvalReport empty;
  empty.policy = "never";
  EXPECT_EQ(report_from_json(report_to_json(empty)), empty);
  EXPECT_EQ(error_code([] { report_from_json("[1,2"); }), Errc::ParseError);
}

TEST(ReportIo, AggregateAndCsvRoundTrip) {
  std::vector<EvalReport> uniform(2), runs(2);
  for (std::uint64_t s = 0; s < 2; ++s) {
    uniform[s].seed = runs[s].seed = s;
    uniform[s].sctr = 0.02;
    uniform[s].regret = 0.04;
    runs[s].sctr = 0.04 + 0.01 * static_cast<double>(s);
    runs[s].regret = 0.02 - 0.01 * static_cast<double>(s);
  }
  const auto row = aggregate("p", runs, uniform);
  EXPECT_EQ(row.runs, 2u);
  EXPECT_NEAR(row.sctr_mean, 0.045, 1e-15);
  EXPECT_NEAR(row.sctr_se, 0.005, 1e-15);  // sd 0.00707 / √2
  EXPECT_NEAR(row.regret_mean, 0.015, 1e-15);
  EXPECT_NEAR(row.regret_norm, 0.375, 1e-15);
  EXPECT_NEAR(row.regret_norm_se, 0.125, 1e-15);

  const auto path = std::filesystem::temp_directory_path() / "crank_agg_test" / "aggregate.csv";
  const std::vector<AggregateRow> rows{row};
  write_aggregate_csv(path, rows);
  const auto back = read_aggregate_csv(path);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].policy, "p");
  EXPECT_EQ(back[0].regret_norm, row.regret_norm);
  std::filesystem::remove_all(path.parent_path());

  const std::vector<double> one{3.0};
  EXPECT_EQ(mean_and_se(one), std::make_pair(3.0, 0.0));
}

}  // namespace
}  // namespace crank::replay
