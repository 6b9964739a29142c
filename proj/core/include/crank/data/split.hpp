#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace crank::data {

struct SplitSpec {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;

  /// Fractions must be nonnegative and sum to 1 within 1e-9.
  void validate() const;
};

struct SplitResult {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

/// Product-level random split. Set sizes use largest-remainder rounding
/// (ties go to train, then validation); each set keeps the input order.
SplitResult split(std::span<const std::string> products, const SplitSpec& spec, std::uint64_t seed);

/// CSV product_id,split with split ∈ {train, validation, test}.
void write_split(const std::filesystem::path& path, const SplitResult& result);
SplitResult load_split(const std::filesystem::path& path);

}  // namespace crank::data
