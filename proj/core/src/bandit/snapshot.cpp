#include "crank/bandit/snapshot.hpp"

#include <json.hpp>

#include "crank/core/error.hpp"

namespace crank::bandit {

using nlohmann::json;

std::string posterior_to_json(const NigPosterior& posterior) {
  const Eigen::Index d = posterior.dim();
  std::vector<double> lower;
  lower.reserve(static_cast<std::size_t>(d * (d + 1) / 2));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) lower.push_back(posterior.precision()(i, j));
  }
  json doc;
  doc["d"] = d;
  doc["mu"] = std::vector<double>(posterior.mu().data(), posterior.mu().data() + d);
  doc["sigma_lower"] = lower;
  doc["a"] = posterior.a();
  doc["b"] = posterior.b();
  doc["t"] = posterior.t();
  return doc.dump();
}

NigPosterior posterior_from_json(const NigPrior& prior, const std::string& text) {
  try {
    const json doc = json::parse(text);
    const auto d = doc.at("d").get<Eigen::Index>();
    const auto mu_values = doc.at("mu").get<std::vector<double>>();
    const auto lower = doc.at("sigma_lower").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(mu_values.size()) != d ||
        static_cast<Eigen::Index>(lower.size()) != d * (d + 1) / 2) {
      fail(Errc::ParseError, "posterior snapshot: inconsistent sizes");
    }
    Matrix precision(d, d);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        precision(i, j) = lower[k];
        precision(j, i) = lower[k];
        ++k;
      }
    }
    const FeatureVector mu = Eigen::Map<const FeatureVector>(mu_values.data(), d);
    return NigPosterior::restore(prior, mu, precision, doc.at("a").get<double>(),
                                 doc.at("b").get<double>(), doc.at("t").get<std::uint64_t>());
  } catch (const json::exception& e) {
    fail(Errc::ParseError, std::string("posterior snapshot: ") + e.what());
  }
}

}  // namespace crank::bandit
