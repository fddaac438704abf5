// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ecgbench/config.hpp"
#include "ecgbench/regimes.hpp"

namespace ecgbench::results {

inline constexpr int kSchemaVersion = 1;

struct ResultsFile {
  int schema_version = kSchemaVersion;
  std::string tool = "ecgbench";
  std::string tool_version;
  Json config;  // canonical config the run used
  regimes::MetricsReport report;
};

ResultsFile make_results(const RunConfig& cfg, const regimes::MetricsReport& report);

Json to_json(const ResultsFile& r);
/// Throws SchemaVersionMismatch for a missing or newer schema_version, SchemaError otherwise.
ResultsFile from_json(const Json& j);

/// Canonical text form: to_json(from_json(parse(dump(r)))) dumps to the same bytes.
std::string dump(const ResultsFile& r);

/// Shortest text that parses back to the same double.
std::string format_number(double v);

inline constexpr const char* kCsvHeader = "regime,setting,Rank-1,Rank-5,EER,AUC,D-prime,TAR@FAR";

/// One row per cell, each metric "mean±std".
std::string to_csv(const regimes::MetricsReport& report);

void write_results(const ResultsFile& r, const std::filesystem::path& json_path,
                   const std::filesystem::path& csv_path);
ResultsFile read_results(const std::filesystem::path& path);

/// Side-by-side means (and stds) of every cell across runs.
std::string comparison_table(const std::vector<std::pair<std::string, ResultsFile>>& runs);

struct DeltaRow {
  regimes::CellKey a;
  regimes::CellKey b;
  regimes::CellSummary first;
  regimes::CellSummary second;
};

/// Cells matched by (regime, setting). When the runs share no cell and each holds a single regime,
/// cells are matched by setting alone, so an SS run can be compared against an LLO run.
std::vector<DeltaRow> match_cells(const ResultsFile& a, const ResultsFile& b);

/// b - a per metric mean.
std::string delta_table(const ResultsFile& a, const ResultsFile& b);

}  // namespace ecgbench::results
