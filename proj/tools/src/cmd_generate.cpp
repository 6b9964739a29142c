#include <iostream>

#include "commands.hpp"

namespace crank::cli {

int cmd_generate(const GenerateOptions& options) {
  options.split.validate();
  const auto generated = data::generate(options.generator);
  const fs::path out(options.out);

  std::vector<std::string> products;
  for (std::size_t n = 0; n < options.generator.products; ++n) products.push_back(data::product_name(n));
  const auto split = data::split(products, options.split, options.generator.seed);

  data::write_impressions(out / "impressions.csv", generated.log);
  data::write_features(out / "features.jsonl", generated.features);
  data::write_ground_truth(out / "ground_truth.csv", generated.truth);
  data::write_split(out / "splits.csv", split);

  std::cout << "impressions.csv " << generated.log.size() << " rows\n"
            << "features.jsonl " << generated.features.size() << " rows\n"
            << "ground_truth.csv " << generated.truth.size() << " rows\n"
            << "splits.csv " << products.size() << " rows (train " << split.train.size() << ", validation "
            << split.validation.size() << ", test " << split.test.size() << ")\n";
  return 0;
}

}  // namespace crank::cli
