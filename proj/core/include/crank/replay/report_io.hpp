#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "crank/replay/mushroom_run.hpp"
#include "crank/replay/replay.hpp"

namespace crank::replay {

/// JSON without the display-share table (that goes to its own CSV).
std::string report_to_json(const EvalReport& report);
/// Throws Errc::ParseError.
EvalReport report_from_json(const std::string& text);

void write_report(const std::filesystem::path& path, const EvalReport& report);
EvalReport read_report(const std::filesystem::path& path);

/// day,daily_sctr,cumulative_sctr,matched
void write_curves_csv(const std::filesystem::path& path, const EvalReport& report);
/// product,day,creative,share
void write_shares_csv(const std::filesystem::path& path, const EvalReport& report);

struct AggregateRow {
  std::string policy;
  std::size_t runs = 0;
  double sctr_mean = 0.0;
  double sctr_se = 0.0;
  double regret_mean = 0.0;
  double regret_norm = 0.0;
  double regret_norm_se = 0.0;
};

/// Mean and standard error over seeds. `uniform` must hold one report per
/// seed that appears in `runs`; a run is normalised by the uniform report
/// with the same seed. Throws Errc::NoMatches when a run has no sCTR.
AggregateRow aggregate(const std::string& policy, std::span<const EvalReport> runs,
                       std::span<const EvalReport> uniform);

/// policy,runs,sctr_mean,sctr_se,regret_mean,regret_norm,regret_norm_se
void write_aggregate_csv(const std::filesystem::path& path, std::span<const AggregateRow> rows);
std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path);

/// round,cumulative_regret
void write_regret_trace_csv(const std::filesystem::path& path, const MushroomTrace& trace);

/// Sample mean and standard error (0 for a single value).
std::pair<double, double> mean_and_se(std::span<const double> values);

}  // namespace crank::replay
