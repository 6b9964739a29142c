#pragma once

#include <string>

#include "crank/bandit/nig.hpp"

namespace crank::bandit {

/// {"d", "mu", "sigma_lower" (row-major lower triangle), "a", "b", "t"}
std::string posterior_to_json(const NigPosterior& posterior);

/// Inverse of posterior_to_json; needs the prior the posterior started from.
NigPosterior posterior_from_json(const NigPrior& prior, const std::string& text);

}  // namespace crank::bandit
