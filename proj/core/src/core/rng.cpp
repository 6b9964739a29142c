#include "crank/core/rng.hpp"

namespace crank::core {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(stream ^ 0xd1b54a32d192ed03ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(make_engine(seed, stream)) {}

SeededRng SeededRng::derive(std::uint64_t substream) const {
  return SeededRng(seed_, splitmix64(stream_ * 0x9e3779b97f4a7c15ULL + substream + 1));
}

double SeededRng::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double SeededRng::normal() { return normal_(engine_); }

double SeededRng::gamma(double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(engine_);
}

std::size_t SeededRng::index(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

bool SeededRng::bernoulli(double p) { return uniform() < p; }

std::uint64_t SeededRng::poisson(double mean) {
  return std::poisson_distribution<std::uint64_t>(mean)(engine_);
}

}  // namespace crank::core
