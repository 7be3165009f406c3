#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoling/inference.hpp"
#include "geoling/lingdata.hpp"
#include "geoling/synthgen.hpp"

namespace geoling {

/// File-format and filesystem failures; mapped to the I/O exit code by the
/// CLI.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Observations CSV: header row, columns `x,y` plus `value` (binary 0/1 or
/// categorical labels), `freq` (scalar frequency), or `f0..f{k-1}` (simplex
/// rows). Rows with an empty cell are dropped and counted. Categorical labels
/// map to indices in first-appearance order.
struct IngestResult {
  Dataset dataset;
  int n_dropped_rows = 0;
  std::vector<std::string> category_labels;
};

IngestResult read_observations_csv(const std::filesystem::path& path, Shape shape,
                                   Metric metric = Metric::euclidean);

void write_observations_csv(const std::filesystem::path& path, const Dataset& ds);

/// Region CSV: header `id,population,centroid_x,centroid_y[,pool_file]`;
/// pool files (header `x,y`) resolve relative to the region file.
std::vector<Region> read_regions_csv(const std::filesystem::path& path);
void write_regions_csv(const std::filesystem::path& path, std::span<const Region> regions);

/// Scenario configs are `key = value` text; `#` starts a comment.
ScenarioConfig parse_scenario_config(const std::string& text);
std::string scenario_config_to_string(const ScenarioConfig& cfg);
ScenarioConfig read_scenario_config(const std::filesystem::path& path);
void write_scenario_config(const std::filesystem::path& path, const ScenarioConfig& cfg);

/// Dataset-level context echoed into report files.
struct ReportContext {
  std::string variable;
  Shape shape = Shape::binary;
  Eigen::Index n_observations = 0;
  int n_dropped_rows = 0;
  std::vector<std::string> category_labels;
};

/// JSON report bodies (schema_version 1); key order is fixed, so identical
/// inputs serialize byte-identically.
std::string test_report_json(const TestReport& report, const ReportContext& context);

struct BatchFailure {
  std::string name;
  std::string error;
};

std::string batch_report_json(const BatchReport& report, Method method,
                              const std::vector<BatchFailure>& failures);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest round-trip decimal rendering; used by every CSV writer.
std::string format_double(double value);

}  // namespace geoling
