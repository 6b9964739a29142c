#include "crank/replay/report_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crank/core/error.hpp"
#include "crank/data/io.hpp"

namespace crank::replay {
namespace {

using json = nlohmann::ordered_json;
using data::format_double;

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) fail(Errc::IoError, "error writing " + path.string());
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string report_to_json(const EvalReport& r) {
  json j;
  j["policy"] = r.policy;
  j["seed"] = r.seed;
  j["logged_impressions"] = r.logged_impressions;
  j["matched_impressions"] = r.matched_impressions;
  j["matched_clicks"] = r.matched_clicks;
  j["no_match"] = r.no_match();
  j["sctr"] = r.sctr ? json(*r.sctr) : json(nullptr);
  j["oracle_ctr"] = r.oracle_ctr;
  j["regret"] = r.regret ? json(*r.regret) : json(nullptr);
  j["products"] = r.products;
  j["products_without_match"] = r.products_without_match;
  json curve = json::array();
  for (const auto& p : r.curve) {
    curve.push_back(json{{"day", p.day},
                         {"daily_sctr", p.daily_sctr},
                         {"cumulative_sctr", p.cumulative_sctr},
                         {"matched", p.matched},
                         {"clicks", p.clicks}});
  }
  j["curve"] = std::move(curve);
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    EvalReport r;
    r.policy = j.at("policy").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.logged_impressions = j.at("logged_impressions").get<std::uint64_t>();
    r.matched_impressions = j.at("matched_impressions").get<std::uint64_t>();
    r.matched_clicks = j.at("matched_clicks").get<std::uint64_t>();
    if (!j.at("sctr").is_null()) r.sctr = j["sctr"].get<double>();
    r.oracle_ctr = j.at("oracle_ctr").get<double>();
    if (!j.at("regret").is_null()) r.regret = j["regret"].get<double>();
    r.products = j.at("products").get<std::uint64_t>();
    r.products_without_match = j.at("products_without_match").get<std::uint64_t>();
    for (const auto& p : j.at("curve")) {
      r.curve.push_back(DayPoint{p.at("day").get<std::uint32_t>(), p.at("daily_sctr").get<double>(),
                                 p.at("cumulative_sctr").get<double>(), p.at("matched").get<std::uint64_t>(),
                                 p.at("clicks").get<std::uint64_t>()});
    }
    return r;
  } catch (const json::exception& e) {
    fail(Errc::ParseError, std::string("report: ") + e.what());
  }
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
  auto out = open_out(path);
  out << report_to_json(report);
  finish(out, path);
}

EvalReport read_report(const std::filesystem::path& path) { return report_from_json(slurp(path)); }

void write_curves_csv(const std::filesystem::path& path, const EvalReport& report) {
  auto out = open_out(path);
  out << "day,daily_sctr,cumulative_sctr,matched\n";
  for (const auto& p : report.curve) {
    out << p.day << ',' << format_double(p.daily_sctr) << ',' << format_double(p.cumulative_sctr) << ','
        << p.matched << '\n';
  }
  finish(out, path);
}

void write_shares_csv(const std::filesystem::path& path, const EvalReport& report) {
  auto out = open_out(path);
  out << "product,day,creative,share\n";
  for (const auto& s : report.shares) {
    out << s.product << ',' << s.day << ',' << s.creative << ',' << format_double(s.share) << '\n';
  }
  finish(out, path);
}

std::pair<double, double> mean_and_se(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

AggregateRow aggregate(const std::string& policy, std::span<const EvalReport> runs,
                       std::span<const EvalReport> uniform) {
  AggregateRow row;
  row.policy = policy;
  row.runs = runs.size();
  std::vector<double> sctr, regret, norm;
  for (const auto& r : runs) {
    if (!r.sctr) fail(Errc::NoMatches, "policy " + policy + " matched no impressions");
    const EvalReport* base = nullptr;
    for (const auto& u : uniform) {
      if (u.seed == r.seed) base = &u;
    }
    if (base == nullptr) {
      fail(Errc::PreconditionViolated, "no uniform report for seed " + std::to_string(r.seed));
    }
    sctr.push_back(*r.sctr);
    regret.push_back(*r.regret);
    norm.push_back(normalized_regret(r, *base));
  }
  std::tie(row.sctr_mean, row.sctr_se) = mean_and_se(sctr);
  row.regret_mean = mean_and_se(regret).first;
  std::tie(row.regret_norm, row.regret_norm_se) = mean_and_se(norm);
  return row;
}

void write_aggregate_csv(const std::filesystem::path& path, std::span<const AggregateRow> rows) {
  auto out = open_out(path);
  out << "policy,runs,sctr_mean,sctr_se,regret_mean,regret_norm,regret_norm_se\n";
  for (const auto& r : rows) {
    out << r.policy << ',' << r.runs << ',' << format_double(r.sctr_mean) << ',' << format_double(r.sctr_se)
        << ',' << format_double(r.regret_mean) << ',' << format_double(r.regret_norm) << ','
        << format_double(r.regret_norm_se) << '\n';
  }
  finish(out, path);
}

std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  std::vector<AggregateRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 || line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 7) fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 7 fields");
    try {
      rows.push_back(AggregateRow{f[0], std::stoul(f[1]), std::stod(f[2]), std::stod(f[3]), std::stod(f[4]),
                                  std::stod(f[5]), std::stod(f[6])});
    } catch (const std::exception&) {
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": bad number");
    }
  }
  return rows;
}

void write_regret_trace_csv(const std::filesystem::path& path, const MushroomTrace& trace) {
  auto out = open_out(path);
  out << "round,cumulative_regret\n";
  for (const auto& p : trace.trace) out << p.round << ',' << format_double(p.cumulative_regret) << '\n';
  finish(out, path);
}

}  // namespace crank::replay
