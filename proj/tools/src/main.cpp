#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "crank/core/error.hpp"

namespace {

using namespace crank;
using namespace crank::cli;

constexpr int kInputError = 2;
constexpr int kNumericalError = 3;

int report_error(std::string_view code, const std::string& message, int exit_code) {
  nlohmann::ordered_json j;
  j["error"] = code;
  j["message"] = message;
  j["exit_code"] = exit_code;
  std::cerr << j.dump() << '\n';
  return exit_code;
}

void add_data_source(CLI::App& app, DataSource& source) {
  app.add_option("--data", source.dir, "Dataset directory (impressions.csv, features.jsonl, splits.csv)");
  app.add_option("--impressions", source.impressions, "Impression log CSV");
  app.add_option("--features", source.features, "Feature JSONL");
  app.add_option("--splits", source.splits, "Split CSV");
  app.add_option("--col-product", source.columns.product, "Header of the product id column")->capture_default_str();
  app.add_option("--col-creative", source.columns.creative, "Header of the creative id column")->capture_default_str();
  app.add_option("--col-day", source.columns.day, "Header of the day column")->capture_default_str();
  app.add_option("--col-click", source.columns.click, "Header of the click column")->capture_default_str();
}

void add_bandit_flags(CLI::App& app, BanditFlags& flags) {
  app.add_option("--eta", flags.eta, "NIG prior a0 = b0")->capture_default_str();
  app.add_option("--ridge-scale", flags.ridge_scale, "NIG prior precision scale")->capture_default_str();
  app.add_option("--theta1", flags.theta1, "Fusion sigmoid scale")->capture_default_str();
  app.add_option("--theta2", flags.theta2, "Fusion sigmoid offset (impressions)")->capture_default_str();
  app.add_option("--epsilon", flags.epsilon, "Exploration rate of epsilon_greedy and lin_greedy")->capture_default_str();
  app.add_option("--ucb-alpha", flags.ucb_alpha, "Bonus multiplier of lin_ucb and neural_ucb")->capture_default_str();
}

void add_seeds(CLI::App& app, std::vector<std::uint64_t>& seeds) {
  app.add_option("--seed,--seeds", seeds, "Seed list, e.g. 0,1,2")->delimiter(',')->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Creative ranking with visual priors and hybrid Thompson sampling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "crank 0.3.0");

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic impression log, features and ground truth");
  generate->set_config("--config");
  auto& g = gen.generator;
  generate->add_option("--products", g.products, "Number of products")->capture_default_str();
  generate->add_option("--dim", g.dim, "Feature dimension")->capture_default_str();
  generate->add_option("--min-creatives", g.min_creatives)->capture_default_str();
  generate->add_option("--mean-creatives", g.mean_creatives)->capture_default_str();
  generate->add_option("--max-creatives", g.max_creatives)->capture_default_str();
  generate->add_option("--min-days", g.min_days)->capture_default_str();
  generate->add_option("--max-days", g.max_days)->capture_default_str();
  generate->add_option("--impressions-per-day", g.impressions_per_day, "Poisson mean per product-day")
      ->capture_default_str();
  generate->add_option("--feature-scale", g.feature_scale)->capture_default_str();
  generate->add_option("--signal-sd", g.signal_sd, "Logit sd explained by shared weights")->capture_default_str();
  generate->add_option("--product-weight-sd", g.product_weight_sd, "Per-product weight spread")->capture_default_str();
  generate->add_option("--offset-sd", g.offset_sd, "Creative logit offset sd")->capture_default_str();
  generate->add_option("--product-logit-sd", g.product_logit_sd)->capture_default_str();
  generate->add_option("--base-logit", g.base_logit)->capture_default_str();
  generate->add_option("--ctr-floor", g.ctr_floor)->capture_default_str();
  generate->add_option("--ctr-ceiling", g.ctr_ceiling)->capture_default_str();
  std::optional<double> planted;
  generate->add_option("--planted-ratio", planted, "Best/worst CTR ratio per product");
  generate->add_option("--train", gen.split.train, "Train fraction")->capture_default_str();
  generate->add_option("--validation", gen.split.validation, "Validation fraction")->capture_default_str();
  generate->add_option("--test", gen.split.test, "Test fraction")->capture_default_str();
  generate->add_option("--seed", g.seed)->capture_default_str();
  generate->add_option("--out", gen.out, "Output directory")->capture_default_str();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train-prior", "Fit the linear attractiveness scorer on the train split");
  train_cmd->set_config("--config");
  add_data_source(*train_cmd, train.source);
  auto& t = train.train;
  train_cmd->add_option("--gamma", train.gammas, "Point-wise loss weight; a list runs a sweep")
      ->delimiter(',')
      ->capture_default_str();
  train_cmd->add_option("--temperature", t.temperature, "Label softmax temperature")->capture_default_str();
  train_cmd->add_option("--epochs", t.epochs)->capture_default_str();
  train_cmd->add_option("--batch-size", t.batch_size)->capture_default_str();
  train_cmd->add_option("--learning-rate", t.learning_rate)->capture_default_str();
  train_cmd->add_option("--final-learning-rate", t.final_learning_rate)->capture_default_str();
  train_cmd->add_option("--hidden-width", t.hidden_width, "0 for the linear scorer")->capture_default_str();
  bool no_weighting = false, no_smoothing = false;
  train_cmd->add_flag("--no-weighted-sampling", no_weighting);
  train_cmd->add_flag("--no-label-smoothing", no_smoothing);
  train_cmd->add_option("--seed", t.seed)->capture_default_str();
  train_cmd->add_option("--out", train.out)->capture_default_str();

  ReplayOptions rep;
  auto* replay_cmd = app.add_subcommand("replay", "Rejection-replay policies over a logged split");
  replay_cmd->set_config("--config");
  add_data_source(*replay_cmd, rep.source);
  replay_cmd->add_option("--split", rep.split, "train, validation, test or all")->capture_default_str();
  replay_cmd->add_option("--policy,--policies", rep.policies, "Policies, e.g. uniform,hbm+warmup")
      ->capture_default_str();
  add_seeds(*replay_cmd, rep.seeds);
  replay_cmd->add_option("--weights", rep.weights, "Scorer weights JSON for prior_greedy and +warmup");
  add_bandit_flags(*replay_cmd, rep.bandit);
  replay_cmd->add_option("--workers", rep.workers, "Parallel runs")->capture_default_str();
  bool no_shares = false;
  replay_cmd->add_flag("--no-shares", no_shares, "Skip the display-share CSVs");
  replay_cmd->add_option("--out", rep.out)->capture_default_str();

  MushroomOptions mush;
  auto* mushroom_cmd = app.add_subcommand("mushroom", "UCI Mushroom eat/no-eat benchmark");
  mushroom_cmd->set_config("--config");
  mushroom_cmd->add_option("--data", mush.data, "agaricus-lepiota.data (or CRANK_MUSHROOM_DATA)");
  mushroom_cmd->add_option("--policy,--policies", mush.policies)->capture_default_str();
  add_seeds(*mushroom_cmd, mush.seeds);
  mushroom_cmd->add_option("--rounds", mush.rounds)->capture_default_str();
  mushroom_cmd->add_option("--trace-every", mush.trace_every)->capture_default_str();
  add_bandit_flags(*mushroom_cmd, mush.bandit);
  mushroom_cmd->add_option("--workers", mush.workers)->capture_default_str();
  mushroom_cmd->add_option("--out", mush.out)->capture_default_str();

  ReportOptions rpt;
  auto* report_cmd = app.add_subcommand("report", "Summarise a replay directory as a regret/sCTR table");
  report_cmd->add_option("--in", rpt.in, "Replay output directory")->capture_default_str();
  report_cmd->add_option("--out", rpt.out, "Table CSV (default <in>/table.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", e.what(), kInputError);
  }

  try {
    if (*generate) {
      g.planted_ratio = planted;
      return cmd_generate(gen);
    }
    if (*train_cmd) {
      t.weighted_sampling = !no_weighting;
      t.label_smoothing = !no_smoothing;
      return cmd_train_prior(train);
    }
    if (*replay_cmd) {
      rep.shares = !no_shares;
      return cmd_replay(rep);
    }
    if (*mushroom_cmd) return cmd_mushroom(mush);
    if (*report_cmd) return cmd_report(rpt);
  } catch (const crank::Error& e) {
    return report_error(errc_name(e.code()), e.what(), is_numerical(e.code()) ? kNumericalError : kInputError);
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error("IoError", e.what(), kInputError);
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what(), kInputError);
  }
  return kInputError;
}
