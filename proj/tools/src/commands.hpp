#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crank/bandit/policies.hpp"
#include "crank/data/generator.hpp"
#include "crank/data/io.hpp"
#include "crank/data/split.hpp"
#include "crank/prior/train.hpp"

namespace crank::cli {

namespace fs = std::filesystem;

/// Where a command reads its creative-ranking data from. `dir` holds
/// impressions.csv, features.jsonl and splits.csv; the explicit paths
/// override individual files.
struct DataSource {
  std::string dir;
  std::string impressions;
  std::string features;
  std::string splits;
  data::ImpressionColumns columns;

  fs::path impressions_path() const;
  fs::path features_path() const;
  fs::path splits_path() const;
  /// Throws Errc::InvalidConfig unless exactly one source is named.
  void validate() const;
};

struct GenerateOptions {
  data::GeneratorConfig generator;
  data::SplitSpec split;
  std::string out = "data";
};

struct TrainOptions {
  DataSource source;
  prior::TrainConfig train;
  std::vector<double> gammas{0.5};
  std::string out = "prior";
};

struct BanditFlags {
  double eta = 6.0;
  double ridge_scale = 0.25;
  double theta1 = 50.0;
  double theta2 = 150.0;
  double epsilon = 0.05;
  double ucb_alpha = 1.0;

  bandit::PolicyConfig config() const;
};

struct ReplayOptions {
  DataSource source;
  std::string split = "test";
  std::vector<std::string> policies{"uniform", "epsilon_greedy", "lin_thompson", "hbm", "hbm+warmup"};
  std::vector<std::uint64_t> seeds{0};
  std::string weights;
  BanditFlags bandit;
  std::size_t workers = 1;
  bool shares = true;
  std::string out = "replay";
};

struct MushroomOptions {
  std::string data;
  std::vector<std::string> policies{"uniform", "epsilon_greedy", "lin_thompson", "hbm(group=bruises)"};
  std::vector<std::uint64_t> seeds{0};
  std::size_t rounds = 50000;
  std::size_t trace_every = 500;
  BanditFlags bandit;
  std::size_t workers = 1;
  std::string out = "mushroom";
};

struct ReportOptions {
  std::string in = "replay";
  std::string out;
};

int cmd_generate(const GenerateOptions& options);
int cmd_train_prior(const TrainOptions& options);
int cmd_replay(const ReplayOptions& options);
int cmd_mushroom(const MushroomOptions& options);
int cmd_report(const ReportOptions& options);

/// "a,b(c,d),e" → {"a", "b(c,d)", "e"}: commas inside parentheses do not split.
std::vector<std::string> split_policy_list(const std::vector<std::string>& raw);
/// Directory-safe version of a policy label.
std::string label_dir(const std::string& label);
/// Runs job(0) … job(n−1) on up to `workers` threads and rethrows the
/// lowest-indexed failure.
void run_jobs(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& job);

void log_line(const std::string& message);

}  // namespace crank::cli
