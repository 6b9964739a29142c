#include "crank/data/mushroom.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "crank/core/error.hpp"

namespace crank::data {
namespace {

constexpr std::array<std::string_view, kMushroomAttributes> kAttributeNames{
    "cap-shape",        "cap-surface",
    "cap-color",        "bruises",
    "odor",             "gill-attachment",
    "gill-spacing",     "gill-size",
    "gill-color",       "stalk-shape",
    "stalk-root",       "stalk-surface-above-ring",
    "stalk-surface-below-ring", "stalk-color-above-ring",
    "stalk-color-below-ring",   "veil-type",
    "veil-color",       "ring-number",
    "ring-type",        "spore-print-color",
    "population",       "habitat"};

}  // namespace

MushroomData MushroomData::read(std::istream& in) {
  MushroomData data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != kMushroomAttributes + 1) {
      fail(Errc::WrongColumnCount, "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(kMushroomAttributes + 1) + " columns, got " +
                                       std::to_string(fields.size()));
    }
    MushroomRecord r;
    if (fields[0] == "e") {
      r.poisonous = false;
    } else if (fields[0] == "p") {
      r.poisonous = true;
    } else {
      fail(Errc::ParseError,
           "line " + std::to_string(line_no) + ": class code '" + std::string(fields[0]) + "' is not e or p");
    }
    for (std::size_t a = 0; a < kMushroomAttributes; ++a) {
      const auto code = fields[a + 1];
      if (code.size() != 1) {
        fail(Errc::ParseError, "line " + std::to_string(line_no) + ": attribute " +
                                   std::string(kAttributeNames[a]) + " code '" + std::string(code) +
                                   "' is not a single character");
      }
      r.attributes[a] = code[0];
    }
    data.records_.push_back(r);
  }

  for (std::size_t a = 0; a < kMushroomAttributes; ++a) {
    auto& cats = data.categories_[a];
    for (const auto& r : data.records_) cats.push_back(r.attributes[a]);
    std::sort(cats.begin(), cats.end());
    cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
    data.offsets_[a] = data.width_;
    data.width_ += cats.size();
  }
  return data;
}

MushroomData MushroomData::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  return read(in);
}

std::uint32_t MushroomData::category_of(std::size_t record, std::size_t attr) const {
  const auto& cats = categories_.at(attr);
  const char code = records_.at(record).attributes[attr];
  return static_cast<std::uint32_t>(std::lower_bound(cats.begin(), cats.end(), code) - cats.begin());
}

FeatureVector MushroomData::eat_context(std::size_t record) const {
  FeatureVector f = FeatureVector::Zero(context_dim());
  for (std::size_t a = 0; a < kMushroomAttributes; ++a) {
    f(static_cast<Eigen::Index>(offsets_[a] + category_of(record, a))) = 1.0;
  }
  return f;
}

FeatureVector MushroomData::no_eat_context() const {
  FeatureVector f = FeatureVector::Zero(context_dim());
  f(context_dim() - 1) = 1.0;
  return f;
}

std::size_t MushroomData::attribute_index(std::string_view name) {
  for (std::size_t a = 0; a < kMushroomAttributes; ++a) {
    if (kAttributeNames[a] == name) return a;
  }
  fail(Errc::InvalidConfig, "unknown mushroom attribute '" + std::string(name) + "'");
}

}  // namespace crank::data
