#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "crank/data/dataset.hpp"

namespace crank::data {

/// Header names for the impression CSV. Files using another layout (e.g. a
/// released log with different column names) map their headers here.
struct ImpressionColumns {
  std::string product = "product_id";
  std::string creative = "creative_id";
  std::string day = "day";
  std::string click = "click";
};

/// Reads a headed CSV. Extra columns are ignored; an empty file is an empty
/// log. Throws Errc::ParseError with the line number on malformed rows and
/// Errc::InvalidClick when a label is not 0 or 1.
std::vector<ImpressionRecord> read_impressions(std::istream& in, const ImpressionColumns& columns = {});
std::vector<ImpressionRecord> load_impressions(const std::filesystem::path& path,
                                               const ImpressionColumns& columns = {});
void write_impressions(std::ostream& out, std::span<const ImpressionRecord> log);
void write_impressions(const std::filesystem::path& path, std::span<const ImpressionRecord> log);

/// JSONL, one {"creative_id": ..., "vector": [...]} object per line. Blank
/// lines are skipped.
FeatureTable read_features(std::istream& in);
FeatureTable load_features(const std::filesystem::path& path);
void write_features(std::ostream& out, const FeatureTable& table);
void write_features(const std::filesystem::path& path, const FeatureTable& table);

/// CSV with header product_id,creative_id,true_ctr.
std::vector<GroundTruthRow> read_ground_truth(std::istream& in);
std::vector<GroundTruthRow> load_ground_truth(const std::filesystem::path& path);
void write_ground_truth(const std::filesystem::path& path, std::span<const GroundTruthRow> rows);

/// Throws Errc::MissingFeatures naming the first creative of `log` that has
/// no feature vector.
void check_references(std::span<const ImpressionRecord> log, const FeatureTable& features);

/// Loads both files and checks referential integrity.
Dataset load_dataset(const std::filesystem::path& impressions, const std::filesystem::path& features,
                     const ImpressionColumns& columns = {});

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

}  // namespace crank::data
