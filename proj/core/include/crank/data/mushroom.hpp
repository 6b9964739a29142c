#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string_view>
#include <vector>

#include "crank/core/linalg.hpp"

namespace crank::data {

inline constexpr std::size_t kMushroomAttributes = 22;

struct MushroomRecord {
  std::array<char, kMushroomAttributes> attributes{};
  bool poisonous = false;
};

/// UCI agaricus-lepiota records: class code first ('e' edible, 'p'
/// poisonous), then the 22 single-letter attribute codes. '?' is kept as a
/// category of its own.
class MushroomData {
 public:
  /// Throws Errc::WrongColumnCount or Errc::ParseError with the line number.
  static MushroomData read(std::istream& in);
  static MushroomData load(const std::filesystem::path& path);

  const std::vector<MushroomRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  /// Number of one-hot columns: the sum over attributes of the distinct
  /// codes seen (117 for the canonical file).
  std::size_t one_hot_width() const noexcept { return width_; }
  /// One-hot columns plus a trailing bias column owned by the no-eat arm.
  Eigen::Index context_dim() const noexcept { return static_cast<Eigen::Index>(width_ + 1); }

  /// [one-hot(record), 0]
  FeatureVector eat_context(std::size_t record) const;
  /// [0, …, 0, 1]
  FeatureVector no_eat_context() const;

  /// Position of a UCI attribute name ("bruises" → 3); throws
  /// Errc::InvalidConfig for unknown names.
  static std::size_t attribute_index(std::string_view name);
  /// Distinct codes of attribute `attr`, sorted.
  const std::vector<char>& categories(std::size_t attr) const { return categories_.at(attr); }
  /// Index of the record's code among categories(attr).
  std::uint32_t category_of(std::size_t record, std::size_t attr) const;

 private:
  std::vector<MushroomRecord> records_;
  std::array<std::vector<char>, kMushroomAttributes> categories_;
  std::array<std::size_t, kMushroomAttributes> offsets_{};
  std::size_t width_ = 0;
};

}  // namespace crank::data
