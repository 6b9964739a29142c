#include <iostream>

#include "commands.hpp"
#include "crank/core/error.hpp"
#include "crank/prior/weights_io.hpp"

namespace crank::cli {

int cmd_train_prior(const TrainOptions& options) {
  options.source.validate();
  if (options.gammas.empty()) fail(Errc::InvalidConfig, "--gamma needs at least one value");
  const auto features = data::load_features(options.source.features_path());
  const auto log = data::load_impressions(options.source.impressions_path(), options.source.columns);
  data::check_references(log, features);

  const fs::path splits = options.source.splits_path();
  if (!fs::exists(splits)) fail(Errc::IoError, "training split file " + splits.string() + " not found");
  const auto split = data::load_split(splits);
  if (split.train.empty()) fail(Errc::EmptyDataset, "training split is empty");
  const auto groups = data::aggregate_groups(data::filter_products(log, split.train), features);
  if (groups.empty()) fail(Errc::EmptyDataset, "no training product has two or more creatives");

  for (const double gamma : options.gammas) {
    prior::TrainConfig config = options.train;
    config.gamma = gamma;
    config.validate();
    const auto result = prior::train_scorer(groups, config);
    const fs::path dir = options.gammas.size() == 1 ? fs::path(options.out)
                                                    : fs::path(options.out) / ("gamma-" + data::format_double(gamma));
    prior::write_weights(dir / "weights.json", result, config);
    prior::write_loss_trace(dir / "loss.csv", result.trace);
    const auto& last = result.trace.back();
    std::cout << "gamma " << data::format_double(gamma) << ": " << groups.size() << " products, "
              << config.epochs << " epochs, combined loss " << data::format_double(result.trace.front().combined)
              << " -> " << data::format_double(last.combined) << ", wrote " << (dir / "weights.json").string()
              << '\n';
  }
  return 0;
}

}  // namespace crank::cli
