#include "crank/data/split.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include "crank/core/error.hpp"
#include "crank/core/rng.hpp"

namespace crank::data {

void SplitSpec::validate() const {
  for (double f : {train, validation, test}) {
    if (!(f >= 0.0 && f <= 1.0)) fail(Errc::InvalidConfig, "split fractions must lie in [0, 1]");
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) {
    fail(Errc::InvalidConfig, "split fractions must sum to 1");
  }
}

SplitResult split(std::span<const std::string> products, const SplitSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t n = products.size();
  const std::array<double, 3> fractions{spec.train, spec.validation, spec.test};
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double exact = fractions[k] * static_cast<double>(n);
    sizes[k] = static_cast<std::size_t>(std::floor(exact));
    remainders[k] = exact - static_cast<double>(sizes[k]);
    assigned += sizes[k];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  core::SeededRng rng(seed, 0x5b117);
  // Fisher-Yates with our own index draws so the result is platform independent.
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);

  std::vector<std::uint8_t> label(n);
  for (std::size_t i = 0; i < n; ++i) {
    label[perm[i]] = i < sizes[0] ? 0 : (i < sizes[0] + sizes[1] ? 1 : 2);
  }
  SplitResult out;
  for (std::size_t i = 0; i < n; ++i) {
    (label[i] == 0 ? out.train : label[i] == 1 ? out.validation : out.test).push_back(products[i]);
  }
  return out;
}

void write_split(const std::filesystem::path& path, const SplitResult& result) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out << "product_id,split\n";
  for (const auto& p : result.train) out << p << ",train\n";
  for (const auto& p : result.validation) out << p << ",validation\n";
  for (const auto& p : result.test) out << p << ",test\n";
  out.close();
  if (!out) fail(Errc::IoError, "error writing " + path.string());
}

SplitResult load_split(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  SplitResult out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected product_id,split");
    }
    std::string product = line.substr(0, comma);
    const std::string which = line.substr(comma + 1);
    if (which == "train") {
      out.train.push_back(std::move(product));
    } else if (which == "validation") {
      out.validation.push_back(std::move(product));
    } else if (which == "test") {
      out.test.push_back(std::move(product));
    } else {
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": unknown split '" + which + "'");
    }
  }
  return out;
}

}  // namespace crank::data
