#include "crank/replay/replay.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "crank/core/error.hpp"

namespace crank::replay {
namespace {

constexpr std::uint64_t kSequentialStream = ~std::uint64_t{0};

struct ProductOutcome {
  std::uint64_t matched = 0;
  std::uint64_t clicks = 0;
  /// day → (matched, clicks)
  std::map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> days;
  /// (day, candidate index) → displays
  std::map<std::pair<std::uint32_t, std::size_t>, std::uint64_t> displays;
};

ProductOutcome run_product(bandit::Policy& policy, const data::Dataset& dataset,
                           const data::ProductLog& product, core::SeededRng& rng, bool record_shares) {
  std::vector<bandit::Candidate> candidates;
  candidates.reserve(product.candidates.size());
  for (const CreativeId c : product.candidates) {
    candidates.push_back(bandit::Candidate{c, &dataset.features(c)});
  }
  const bandit::ProductView view{product.id, 0, candidates};
  ProductOutcome out;
  for (const auto& event : product.events) {
    const CreativeId chosen = policy.choose(view, rng);
    if (chosen != event.creative) continue;
    ++out.matched;
    out.clicks += event.click;
    auto& day = out.days[event.day];
    ++day.first;
    day.second += event.click;
    if (record_shares) {
      const auto idx = static_cast<std::size_t>(
          std::find(product.candidates.begin(), product.candidates.end(), chosen) - product.candidates.begin());
      ++out.displays[{event.day, idx}];
    }
    policy.observe(view, chosen, dataset.features(chosen), static_cast<double>(event.click));
  }
  return out;
}

}  // namespace

EvalReport replay(const PolicyFactory& factory, const data::Dataset& dataset, const ReplayOptions& options) {
  const auto& products = dataset.products();
  if (products.empty()) fail(Errc::EmptyDataset, "replay needs at least one product");

  std::vector<ProductOutcome> outcomes(products.size());
  auto first = factory();
  const core::SeededRng base(options.seed);
  if (first->separable()) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&](std::unique_ptr<bandit::Policy> reuse) {
      try {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= products.size()) return;
          auto policy = reuse ? std::move(reuse) : factory();
          core::SeededRng rng = base.derive(i);
          outcomes[i] = run_product(*policy, dataset, products[i], rng, options.record_shares);
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(products.size());
      }
    };
    const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, products.size());
    std::vector<std::thread> threads;
    for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(work, nullptr);
    work(std::move(first));
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
  } else {
    core::SeededRng rng = base.derive(kSequentialStream);
    for (std::size_t i = 0; i < products.size(); ++i) {
      outcomes[i] = run_product(*first, dataset, products[i], rng, options.record_shares);
    }
  }

  EvalReport report;
  report.policy = options.label.empty() ? std::string(first ? first->kind() : "") : options.label;
  report.seed = options.seed;
  report.logged_impressions = dataset.impression_count();
  report.products = products.size();
  report.oracle_ctr = oracle_ctr(dataset);
  std::map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> days;
  for (std::size_t i = 0; i < products.size(); ++i) {
    const auto& o = outcomes[i];
    report.matched_impressions += o.matched;
    report.matched_clicks += o.clicks;
    if (o.matched == 0) ++report.products_without_match;
    for (const auto& [day, mc] : o.days) {
      days[day].first += mc.first;
      days[day].second += mc.second;
    }
    for (const auto& [key, count] : o.displays) {
      const auto& [day, idx] = key;
      report.shares.push_back(DisplayShare{products[i].name, day,
                                           dataset.creative_name(products[i].candidates[idx]),
                                           static_cast<double>(count) /
                                               static_cast<double>(o.days.at(day).first)});
    }
  }
  if (report.matched_impressions > 0) {
    report.sctr = static_cast<double>(report.matched_clicks) / static_cast<double>(report.matched_impressions);
    report.regret = report.oracle_ctr - *report.sctr;
  }
  std::uint64_t cum_matched = 0, cum_clicks = 0;
  for (const auto& [day, mc] : days) {
    cum_matched += mc.first;
    cum_clicks += mc.second;
    report.curve.push_back(DayPoint{day, static_cast<double>(mc.second) / static_cast<double>(mc.first),
                                    static_cast<double>(cum_clicks) / static_cast<double>(cum_matched),
                                    mc.first, mc.second});
  }
  return report;
}

double oracle_ctr(const data::Dataset& dataset) {
  std::uint64_t clicks = 0, impressions = 0;
  std::vector<std::uint64_t> c, n;
  for (const auto& p : dataset.products()) {
    c.assign(p.candidates.size(), 0);
    n.assign(p.candidates.size(), 0);
    for (const auto& e : p.events) {
      const auto idx = static_cast<std::size_t>(
          std::find(p.candidates.begin(), p.candidates.end(), e.creative) - p.candidates.begin());
      ++n[idx];
      c[idx] += e.click;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < n.size(); ++k) {
      // c[k]/n[k] > c[best]/n[best], cross-multiplied to stay exact.
      if (c[k] * n[best] > c[best] * n[k]) best = k;
    }
    clicks += c[best];
    impressions += n[best];
  }
  if (impressions == 0) fail(Errc::EmptyDataset, "dataset has no impressions");
  return static_cast<double>(clicks) / static_cast<double>(impressions);
}

double normalized_regret(const EvalReport& report, const EvalReport& uniform) {
  if (!report.regret || !uniform.regret) fail(Errc::NoMatches, "regret undefined without matched impressions");
  if (*uniform.regret == 0.0) fail(Errc::DivisionByZero, "uniform regret is zero");
  return *report.regret / *uniform.regret;
}

}  // namespace crank::replay
