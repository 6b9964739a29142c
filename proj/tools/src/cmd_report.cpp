#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "crank/core/error.hpp"
#include "crank/replay/report_io.hpp"

namespace crank::cli {

/// Rebuilds the Table-1 style summary (regret % of uniform, sCTR %) from
/// the per-run reports under a replay output directory.
int cmd_report(const ReportOptions& options) {
  const fs::path in(options.in);
  if (!fs::is_directory(in)) fail(Errc::IoError, "no replay directory " + in.string());
  std::map<std::string, std::vector<replay::EvalReport>> by_policy;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(in)) {
    if (entry.is_regular_file() && entry.path().filename() == "report.json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto r = replay::read_report(f);
    by_policy[r.policy].push_back(std::move(r));
  }
  auto uniform = by_policy.find("uniform");
  if (uniform == by_policy.end()) fail(Errc::PreconditionViolated, "no uniform reports under " + in.string());

  std::vector<replay::AggregateRow> rows;
  rows.push_back(replay::aggregate("uniform", uniform->second, uniform->second));
  for (const auto& [policy, runs] : by_policy) {
    if (policy != "uniform") rows.push_back(replay::aggregate(policy, runs, uniform->second));
  }

  const fs::path out = options.out.empty() ? in / "table.csv" : fs::path(options.out);
  std::ofstream table(out, std::ios::binary);
  if (!table) fail(Errc::IoError, "cannot write " + out.string());
  table << "policy,runs,regret_pct,regret_pct_se,sctr_pct,sctr_pct_se\n";
  std::printf("%-28s %5s %14s %14s\n", "policy", "runs", "regret (%)", "sCTR (%)");
  for (const auto& r : rows) {
    table << r.policy << ',' << r.runs << ',' << data::format_double(100.0 * r.regret_norm) << ','
          << data::format_double(100.0 * r.regret_norm_se) << ',' << data::format_double(100.0 * r.sctr_mean) << ','
          << data::format_double(100.0 * r.sctr_se) << '\n';
    std::printf("%-28s %5zu %8.2f ±%4.2f %8.3f ±%4.3f\n", r.policy.c_str(), r.runs, 100.0 * r.regret_norm,
                100.0 * r.regret_norm_se, 100.0 * r.sctr_mean, 100.0 * r.sctr_se);
  }
  table.close();
  if (!table) fail(Errc::IoError, "error writing " + out.string());
  return 0;
}

}  // namespace crank::cli
