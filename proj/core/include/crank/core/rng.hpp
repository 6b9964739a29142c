#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace crank::core {

/// Seeded random stream. Identical (seed, stream) pairs produce identical
/// draw sequences; derive() hands out statistically independent child
/// streams so each task (product, policy, seed) can own one.
class SeededRng {
 public:
  using result_type = std::uint64_t;

  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  SeededRng derive(std::uint64_t substream) const;

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Gamma(shape, scale = 1).
  double gamma(double shape);
  /// Uniform integer on [0, n).
  std::size_t index(std::size_t n);
  bool bernoulli(double p);
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace crank::core
