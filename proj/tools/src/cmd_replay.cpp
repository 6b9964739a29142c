#include <algorithm>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "crank/core/error.hpp"
#include "crank/prior/weights_io.hpp"
#include "crank/replay/report_io.hpp"
#include "crank/replay/replay.hpp"

namespace crank::cli {

namespace {

std::vector<std::string> select_products(const DataSource& source, const std::string& which) {
  if (which == "all") return {};
  const auto split = data::load_split(source.splits_path());
  if (which == "train") return split.train;
  if (which == "validation") return split.validation;
  if (which == "test") return split.test;
  fail(Errc::InvalidConfig, "--split must be train, validation, test or all");
}

}  // namespace

int cmd_replay(const ReplayOptions& options) {
  options.source.validate();
  if (options.seeds.empty()) fail(Errc::InvalidConfig, "at least one seed is required");
  auto labels = split_policy_list(options.policies);
  if (labels.empty()) fail(Errc::InvalidConfig, "at least one policy is required");

  std::vector<bandit::PolicySpec> specs;
  for (const auto& l : labels) specs.push_back(bandit::parse_policy_spec(l));
  // Every run is normalised by uniform under the same seed.
  if (std::none_of(specs.begin(), specs.end(), [](const auto& s) { return s.label == "uniform"; })) {
    specs.insert(specs.begin(), bandit::parse_policy_spec("uniform"));
  }

  const auto features = data::load_features(options.source.features_path());
  auto log = data::load_impressions(options.source.impressions_path(), options.source.columns);
  data::check_references(log, features);
  if (const auto products = select_products(options.source, options.split); options.split != "all") {
    log = data::filter_products(log, products);
  }
  data::Dataset dataset = data::Dataset::build(log, features);
  if (dataset.products().empty()) fail(Errc::EmptyDataset, "no products in split '" + options.split + "'");

  bandit::PolicyConfig base = options.bandit.config();
  if (!options.weights.empty()) {
    const prior::Scorer scorer = prior::read_scorer(options.weights);
    if (scorer.input_dim() != dataset.dim()) {
      fail(Errc::InvalidConfig, "weights expect dimension " + std::to_string(scorer.input_dim()) +
                                    ", features have " + std::to_string(dataset.dim()));
    }
    if (scorer.has_hidden()) {
      dataset.transform_features([&](const FeatureVector& f) { return scorer.embed(f); });
    }
    base.prior_weights = scorer.head();
  }
  std::vector<bandit::PolicyConfig> configs;
  for (const auto& s : specs) {
    configs.push_back(s.apply(base));
    configs.back().validate(s.kind);
  }

  const std::size_t runs = specs.size() * options.seeds.size();
  std::vector<replay::EvalReport> reports(runs);
  const fs::path out(options.out);
  run_jobs(runs, options.workers, [&](std::size_t job) {
    const std::size_t p = job / options.seeds.size();
    const std::uint64_t seed = options.seeds[job % options.seeds.size()];
    replay::ReplayOptions ro;
    ro.seed = seed;
    ro.label = specs[p].label;
    ro.record_shares = options.shares;
    const auto factory = [&, p] { return bandit::make_policy(specs[p].kind, configs[p]); };
    auto report = replay::replay(factory, dataset, ro);
    const fs::path dir = out / label_dir(specs[p].label) / ("seed-" + std::to_string(seed));
    replay::write_report(dir / "report.json", report);
    replay::write_curves_csv(dir / "curves.csv", report);
    if (options.shares) replay::write_shares_csv(dir / "shares.csv", report);
    report.shares.clear();
    reports[job] = std::move(report);
    log_line("replayed " + specs[p].label + " seed " + std::to_string(seed));
  });

  for (const auto& r : reports) {
    if (r.no_match()) {
      fail(Errc::NoMatches, "policy " + r.policy + " (seed " + std::to_string(r.seed) +
                                ") matched no logged impression; sCTR is undefined");
    }
  }
  const std::span<const replay::EvalReport> uniform(reports.data(), options.seeds.size());
  std::vector<replay::AggregateRow> rows;
  for (std::size_t p = 0; p < specs.size(); ++p) {
    const std::span<const replay::EvalReport> runs_of(reports.data() + p * options.seeds.size(),
                                                      options.seeds.size());
    rows.push_back(replay::aggregate(specs[p].label, runs_of, uniform));
  }
  replay::write_aggregate_csv(out / "aggregate.csv", rows);
  for (const auto& r : rows) {
    std::cout << r.policy << ": sCTR " << data::format_double(r.sctr_mean) << " ± " << data::format_double(r.sctr_se)
              << ", normalized regret " << data::format_double(r.regret_norm) << '\n';
  }
  return 0;
}

}  // namespace crank::cli
