#include "crank/prior/weights_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crank/core/error.hpp"

namespace crank::prior {

using nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd json_vector(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string weights_to_json(const TrainResult& result, const TrainConfig& config) {
  const Scorer& s = result.scorer;
  json doc;
  doc["d"] = s.input_dim();
  doc["w"] = vector_json(s.head());
  doc["config"] = {{"gamma", config.gamma},
                   {"temperature", config.temperature},
                   {"learning_rate", config.learning_rate},
                   {"final_learning_rate", config.final_learning_rate},
                   {"epochs", config.epochs},
                   {"batch_size", config.batch_size},
                   {"weighted_sampling", config.weighted_sampling},
                   {"label_smoothing", config.label_smoothing},
                   {"hidden_width", config.hidden_width},
                   {"seed", config.seed}};
  if (!result.trace.empty()) {
    const auto& last = result.trace.back();
    doc["final_losses"] = {{"epoch", last.epoch},
                           {"listwise", last.listwise},
                           {"pointwise", last.pointwise},
                           {"combined", last.combined}};
  }
  if (s.has_hidden()) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < s.hidden_weights().rows(); ++i) {
      rows.push_back(vector_json(s.hidden_weights().row(i).transpose()));
    }
    doc["hidden"] = {{"width", s.embedding_dim()}, {"W", rows}, {"b", vector_json(s.hidden_bias())}};
  }
  if (result.smoothing) {
    doc["smoothing"] = {{"alpha", result.smoothing->alpha}, {"beta", result.smoothing->beta}};
  }
  return doc.dump(2) + "\n";
}

Scorer scorer_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
    const Eigen::VectorXd head = json_vector(doc.at("w"));
    if (!doc.contains("hidden")) {
      if (doc.at("d").get<Eigen::Index>() != head.size()) {
        fail(Errc::ParseError, "weights: d does not match length of w");
      }
      return Scorer::from_parts(Matrix(), FeatureVector(), head);
    }
    const auto& hidden = doc.at("hidden");
    const auto& rows = hidden.at("W");
    const auto d = doc.at("d").get<Eigen::Index>();
    Matrix w(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Eigen::VectorXd row = json_vector(rows[i]);
      if (row.size() != d) fail(Errc::ParseError, "weights: hidden row has wrong length");
      w.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return Scorer::from_parts(std::move(w), json_vector(hidden.at("b")), head);
  } catch (const json::exception& e) {
    fail(Errc::ParseError, std::string("weights: ") + e.what());
  }
}

void write_weights(const std::filesystem::path& path, const TrainResult& result,
                   const TrainConfig& config) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out << weights_to_json(result, config);
}

Scorer read_scorer(const std::filesystem::path& path) { return scorer_from_json(read_text(path)); }

void write_loss_trace(const std::filesystem::path& path, std::span<const EpochLoss> trace) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out << "epoch,listwise,pointwise,combined\n";
  char line[160];
  for (const auto& e : trace) {
    std::snprintf(line, sizeof line, "%d,%.12g,%.12g,%.12g\n", e.epoch, e.listwise, e.pointwise,
                  e.combined);
    out << line;
  }
}

}  // namespace crank::prior
