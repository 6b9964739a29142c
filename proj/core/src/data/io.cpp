#include "crank/data/io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <unordered_map>

#include <json.hpp>

#include "crank/core/error.hpp"

namespace crank::data {
namespace {

using json = nlohmann::json;

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) fail(Errc::IoError, "error writing " + path.string());
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& msg) {
  fail(Errc::ParseError, "line " + std::to_string(line_no) + ": " + msg);
}

template <typename T>
T parse_number(std::string_view text, std::size_t line_no, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    parse_error(line_no, std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

class HeaderIndex {
 public:
  HeaderIndex(const std::string& header_line, std::size_t line_no) : line_no_(line_no) {
    const auto names = split_csv(header_line);
    for (std::size_t i = 0; i < names.size(); ++i) index_.emplace(std::string(names[i]), i);
    width_ = names.size();
  }
  std::size_t column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) parse_error(line_no_, "missing column '" + name + "'");
    return it->second;
  }
  std::size_t width() const { return width_; }

 private:
  std::size_t line_no_;
  std::size_t width_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<ImpressionRecord> read_impressions(std::istream& in, const ImpressionColumns& columns) {
  std::vector<ImpressionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  std::optional<HeaderIndex> header;
  std::size_t cp = 0, cc = 0, cd = 0, ck = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (!header) {
      if (line.empty()) continue;
      header.emplace(line, line_no);
      cp = header->column(columns.product);
      cc = header->column(columns.creative);
      cd = header->column(columns.day);
      ck = header->column(columns.click);
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header->width()) {
      parse_error(line_no, "expected " + std::to_string(header->width()) + " fields, got " +
                               std::to_string(fields.size()));
    }
    if (fields[cp].empty() || fields[cc].empty()) parse_error(line_no, "empty id");
    ImpressionRecord r;
    r.product_id = std::string(fields[cp]);
    r.creative_id = std::string(fields[cc]);
    r.day = parse_number<std::uint32_t>(fields[cd], line_no, "day");
    const auto click = fields[ck];
    if (click == "0") {
      r.click = 0;
    } else if (click == "1") {
      r.click = 1;
    } else {
      fail(Errc::InvalidClick,
           "line " + std::to_string(line_no) + ": click label '" + std::string(click) + "' is not 0 or 1");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ImpressionRecord> load_impressions(const std::filesystem::path& path,
                                               const ImpressionColumns& columns) {
  auto in = open_in(path);
  return read_impressions(in, columns);
}

void write_impressions(std::ostream& out, std::span<const ImpressionRecord> log) {
  out << "product_id,creative_id,day,click\n";
  for (const auto& r : log) {
    out << r.product_id << ',' << r.creative_id << ',' << r.day << ',' << static_cast<int>(r.click) << '\n';
  }
}

void write_impressions(const std::filesystem::path& path, std::span<const ImpressionRecord> log) {
  auto out = open_out(path);
  write_impressions(out, log);
  close_out(out, path);
}

FeatureTable read_features(std::istream& in) {
  FeatureTable table;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_error(line_no, e.what());
    }
    if (!row.is_object() || !row.contains("creative_id") || !row.contains("vector") ||
        !row["creative_id"].is_string() || !row["vector"].is_array()) {
      parse_error(line_no, "expected {\"creative_id\": string, \"vector\": [numbers]}");
    }
    const auto& vec = row["vector"];
    FeatureVector f(static_cast<Eigen::Index>(vec.size()));
    for (std::size_t i = 0; i < vec.size(); ++i) {
      if (!vec[i].is_number()) parse_error(line_no, "non-numeric vector entry");
      f(static_cast<Eigen::Index>(i)) = vec[i].get<double>();
    }
    try {
      table.add(row["creative_id"].get<std::string>(), std::move(f));
    } catch (const Error& e) {
      parse_error(line_no, e.what());
    }
  }
  return table;
}

FeatureTable load_features(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_features(in);
}

void write_features(std::ostream& out, const FeatureTable& table) {
  for (const auto& id : table.ids()) {
    const FeatureVector& f = *table.find(id);
    out << "{\"creative_id\":" << json(id).dump() << ",\"vector\":[";
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      if (i > 0) out << ',';
      out << format_double(f(i));
    }
    out << "]}\n";
  }
}

void write_features(const std::filesystem::path& path, const FeatureTable& table) {
  auto out = open_out(path);
  write_features(out, table);
  close_out(out, path);
}

std::vector<GroundTruthRow> read_ground_truth(std::istream& in) {
  std::vector<GroundTruthRow> rows;
  std::string line;
  std::size_t line_no = 0;
  std::optional<HeaderIndex> header;
  std::size_t cp = 0, cc = 0, ct = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!header) {
      header.emplace(line, line_no);
      cp = header->column("product_id");
      cc = header->column("creative_id");
      ct = header->column("true_ctr");
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != header->width()) parse_error(line_no, "wrong number of fields");
    rows.push_back(GroundTruthRow{std::string(fields[cp]), std::string(fields[cc]),
                                  parse_number<double>(fields[ct], line_no, "true_ctr")});
  }
  return rows;
}

std::vector<GroundTruthRow> load_ground_truth(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_ground_truth(in);
}

void write_ground_truth(const std::filesystem::path& path, std::span<const GroundTruthRow> rows) {
  auto out = open_out(path);
  out << "product_id,creative_id,true_ctr\n";
  for (const auto& r : rows) out << r.product_id << ',' << r.creative_id << ',' << format_double(r.true_ctr) << '\n';
  close_out(out, path);
}

void check_references(std::span<const ImpressionRecord> log, const FeatureTable& features) {
  for (const auto& r : log) features.at(r.creative_id);
}

Dataset load_dataset(const std::filesystem::path& impressions, const std::filesystem::path& features,
                     const ImpressionColumns& columns) {
  const FeatureTable table = load_features(features);
  const auto log = load_impressions(impressions, columns);
  return Dataset::build(log, table);
}

}  // namespace crank::data
