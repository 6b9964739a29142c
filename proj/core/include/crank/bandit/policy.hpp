#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "crank/core/linalg.hpp"
#include "crank/core/rng.hpp"

namespace crank {

struct ProductId {
  std::uint32_t value = 0;
  auto operator<=>(const ProductId&) const = default;
};

struct CreativeId {
  std::uint32_t value = 0;
  auto operator<=>(const CreativeId&) const = default;
};

}  // namespace crank

namespace crank::bandit {

struct Candidate {
  CreativeId id;
  const FeatureVector* features = nullptr;
};

/// A product offered for one decision: its candidates in a fixed order
/// (ties resolve to the lowest index) and an optional grouping code used by
/// policies whose shared parameters are keyed by an attribute instead of
/// the product.
struct ProductView {
  ProductId product;
  std::uint32_t group = 0;
  std::span<const Candidate> candidates;
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string_view kind() const noexcept = 0;

  /// Throws Errc::EmptyCandidateSet when the product has no candidates.
  virtual CreativeId choose(const ProductView& product, core::SeededRng& rng) = 0;

  /// Throws Errc::UnknownArm when `creative` is not one of the product's candidates.
  virtual void observe(const ProductView& product, CreativeId creative, const FeatureVector& f,
                       double reward) = 0;

  /// True when no state is shared across products, so a fresh instance per
  /// product gives the same result as one instance replayed product by product.
  virtual bool separable() const noexcept = 0;

  /// Attribute name the policy groups shared parameters by, if any.
  virtual std::optional<std::string> group_key() const { return std::nullopt; }
};

/// Index of the largest score; the first one wins ties.
std::size_t argmax_first(std::span<const double> scores);

}  // namespace crank::bandit
