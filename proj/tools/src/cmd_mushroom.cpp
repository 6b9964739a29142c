#include <cstdlib>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "crank/core/error.hpp"
#include "crank/data/mushroom.hpp"
#include "crank/replay/mushroom_run.hpp"
#include "crank/replay/report_io.hpp"

namespace crank::cli {

int cmd_mushroom(const MushroomOptions& options) {
  std::string path = options.data;
  if (path.empty()) {
    if (const char* env = std::getenv("CRANK_MUSHROOM_DATA"); env != nullptr) path = env;
  }
  if (path.empty()) fail(Errc::InvalidConfig, "no mushroom file: pass --data or set CRANK_MUSHROOM_DATA");
  if (options.seeds.empty()) fail(Errc::InvalidConfig, "at least one seed is required");
  const auto data = data::MushroomData::load(path);
  if (data.size() == 0) fail(Errc::EmptyDataset, "mushroom file has no records");

  std::vector<bandit::PolicySpec> specs;
  for (const auto& l : split_policy_list(options.policies)) specs.push_back(bandit::parse_policy_spec(l));
  if (specs.empty()) fail(Errc::InvalidConfig, "at least one policy is required");
  if (std::none_of(specs.begin(), specs.end(), [](const auto& s) { return s.label == "uniform"; })) {
    specs.insert(specs.begin(), bandit::parse_policy_spec("uniform"));
  }
  bandit::PolicyConfig base = options.bandit.config();
  replay::MushroomOptions run;
  run.rounds = options.rounds;
  run.trace_every = options.trace_every;
  base.reward_min = run.rewards.poison_unlucky;
  base.reward_max = run.rewards.safe_eat;
  std::vector<bandit::PolicyConfig> configs;
  for (const auto& s : specs) {
    configs.push_back(s.apply(base));
    configs.back().validate(s.kind);
    if (configs.back().group_key) data::MushroomData::attribute_index(*configs.back().group_key);
  }

  const std::size_t n_seeds = options.seeds.size();
  std::vector<replay::MushroomTrace> traces(specs.size() * n_seeds);
  const fs::path out(options.out);
  run_jobs(traces.size(), options.workers, [&](std::size_t job) {
    const std::size_t p = job / n_seeds;
    const std::uint64_t seed = options.seeds[job % n_seeds];
    auto policy = bandit::make_policy(specs[p].kind, configs[p]);
    auto trace = replay::mushroom_run(*policy, data, run, core::SeededRng(seed));
    trace.policy = specs[p].label;
    replay::write_regret_trace_csv(out / label_dir(specs[p].label) / ("seed-" + std::to_string(seed)) / "regret.csv",
                                   trace);
    traces[job] = std::move(trace);
    log_line("mushroom " + specs[p].label + " seed " + std::to_string(seed));
  });

  fs::create_directories(out);
  std::ofstream table(out / "summary.csv", std::ios::binary);
  table << "policy,runs,regret_mean,regret_se,regret_norm,regret_norm_se\n";
  for (std::size_t p = 0; p < specs.size(); ++p) {
    std::vector<double> regret, norm;
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const auto& t = traces[p * n_seeds + s];
      const auto& u = traces[s];
      if (u.cumulative_regret == 0.0) fail(Errc::DivisionByZero, "uniform regret is zero");
      regret.push_back(t.cumulative_regret);
      norm.push_back(t.cumulative_regret / u.cumulative_regret);
    }
    const auto [rm, rse] = replay::mean_and_se(regret);
    const auto [nm, nse] = replay::mean_and_se(norm);
    table << specs[p].label << ',' << n_seeds << ',' << data::format_double(rm) << ',' << data::format_double(rse)
          << ',' << data::format_double(nm) << ',' << data::format_double(nse) << '\n';
    std::cout << specs[p].label << ": cumulative regret " << data::format_double(rm) << ", normalized "
              << data::format_double(100.0 * nm) << "%\n";
  }
  table.close();
  if (!table) fail(Errc::IoError, "error writing " + (out / "summary.csv").string());
  return 0;
}

}  // namespace crank::cli
