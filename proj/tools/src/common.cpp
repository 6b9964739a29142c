#include <atomic>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <thread>

#include "commands.hpp"
#include "crank/core/error.hpp"

namespace crank::cli {

namespace {

fs::path in_dir(const std::string& dir, const char* name) {
  if (!dir.empty()) return fs::path(dir) / name;
  if (const char* env = std::getenv("CRANK_DATA_DIR"); env != nullptr && *env != '\0') {
    return fs::path(env) / name;
  }
  return fs::path(name);
}

}  // namespace

fs::path DataSource::impressions_path() const {
  return impressions.empty() ? in_dir(dir, "impressions.csv") : fs::path(impressions);
}
fs::path DataSource::features_path() const {
  return features.empty() ? in_dir(dir, "features.jsonl") : fs::path(features);
}
fs::path DataSource::splits_path() const {
  return splits.empty() ? in_dir(dir, "splits.csv") : fs::path(splits);
}

void DataSource::validate() const {
  const bool explicit_files = !impressions.empty() || !features.empty();
  if (!dir.empty() && explicit_files) {
    fail(Errc::InvalidConfig, "give either --data or --impressions/--features, not both");
  }
  if (dir.empty() && !explicit_files && std::getenv("CRANK_DATA_DIR") == nullptr) {
    fail(Errc::InvalidConfig, "no data source: pass --data DIR or set CRANK_DATA_DIR");
  }
}

bandit::PolicyConfig BanditFlags::config() const {
  bandit::PolicyConfig c;
  c.nig.eta = eta;
  c.nig.ridge_scale = ridge_scale;
  c.fusion.theta1 = theta1;
  c.fusion.theta2 = theta2;
  c.epsilon = epsilon;
  c.ucb_alpha = ucb_alpha;
  return c;
}

std::vector<std::string> split_policy_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::string current;
    int depth = 0;
    for (char ch : item) {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (ch == ',' && depth == 0) {
        if (!current.empty()) out.push_back(current);
        current.clear();
      } else {
        current.push_back(ch);
      }
    }
    if (!current.empty()) out.push_back(current);
  }
  return out;
}

std::string label_dir(const std::string& label) {
  std::string out;
  for (char ch : label) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '+' ||
                      ch == '=' || ch == '.';
    out.push_back(keep ? ch : '_');
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

void run_jobs(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto work = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(workers, n));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void log_line(const std::string& message) {
  static std::mutex m;
  std::lock_guard lock(m);
  std::cerr << "crank: " << message << '\n';
}

}  // namespace crank::cli
