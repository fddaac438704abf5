// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/results.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "ecgbench/error.hpp"
#include "ecgbench/ingest.hpp"

#ifndef ECGBENCH_VERSION
#define ECGBENCH_VERSION "0.0.0"
#endif

namespace ecgbench::results {

using regimes::CellKey;
using regimes::CellSummary;
using regimes::SeedMetrics;
using regimes::Stat;

namespace {

struct MetricField {
  const char* key;
  const char* label;
  Stat CellSummary::*stat;
  double SeedMetrics::*raw;
};

constexpr std::array<MetricField, 6> kMetricFields{{
    {"rank1", "Rank-1", &CellSummary::rank1, &SeedMetrics::rank1},
    {"rank5", "Rank-5", &CellSummary::rank5, &SeedMetrics::rank5},
    {"eer", "EER", &CellSummary::eer, &SeedMetrics::eer},
    {"auc", "AUC", &CellSummary::auc, &SeedMetrics::auc},
    {"dprime", "D-prime", &CellSummary::dprime, &SeedMetrics::dprime},
    {"tar", "TAR@FAR", &CellSummary::tar, &SeedMetrics::tar},
}};

constexpr std::array<std::pair<const char*, std::size_t SeedMetrics::*>, 8> kCountFields{{
    {"probes", &SeedMetrics::probes},
    {"genuine_pairs", &SeedMetrics::genuine_pairs},
    {"impostor_pairs", &SeedMetrics::impostor_pairs},
    {"subjects_total", &SeedMetrics::subjects_total},
    {"subjects_used", &SeedMetrics::subjects_used},
    {"subjects_excluded", &SeedMetrics::subjects_excluded},
    {"training_subjects", &SeedMetrics::training_subjects},
    {"evaluation_subjects", &SeedMetrics::evaluation_subjects},
}};

Json number(double v, const std::string& what) {
  require(std::isfinite(v), ErrorCode::InvalidArgument, what + " is not finite");
  return v;
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  require(j.is_object() && j.contains(key), ErrorCode::SchemaError, where + " lacks '" + key + "'");
  return j.at(key);
}

double get_number(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  require(v.is_number(), ErrorCode::SchemaError, where + "." + key + " must be a number");
  return v.get<double>();
}

std::size_t get_count(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  require(is_non_negative_integer(v), ErrorCode::SchemaError, where + "." + key + " must be a non-negative integer");
  return v.get<std::size_t>();
}

Json key_json(const CellKey& k) {
  return Json{{"regime", std::string(to_string(k.first))}, {"setting", std::string(to_string(k.second))}};
}

CellKey parse_key(const Json& j, const std::string& where) {
  const Json& r = field(j, "regime", where);
  const Json& s = field(j, "setting", where);
  require(r.is_string() && s.is_string(), ErrorCode::SchemaError, where + ": regime and setting must be strings");
  auto regime = parse_regime(r.get<std::string>());
  auto setting = parse_setting(s.get<std::string>());
  require(regime && setting, ErrorCode::SchemaError, where + ": unknown regime or setting");
  return {*regime, *setting};
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string signed_fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.4f", v);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace

ResultsFile make_results(const RunConfig& cfg, const regimes::MetricsReport& report) {
  ResultsFile r;
  r.tool_version = ECGBENCH_VERSION;
  r.config = ecgbench::to_json(cfg);
  r.report = report;
  return r;
}

Json to_json(const ResultsFile& r) {
  const auto& rep = r.report;
  Json cells = Json::array();
  for (const auto& [key, c] : rep.cells) {
    Json cell = key_json(key);
    Json metrics = Json::object();
    for (const auto& f : kMetricFields) {
      const Stat& s = c.*(f.stat);
      metrics[f.key] = {{"mean", number(s.mean, f.key)}, {"std", number(s.std, f.key)}};
    }
    cell["metrics"] = std::move(metrics);
    cell["subjects_total"] = c.subjects_total;
    cell["subjects_used"] = c.subjects_used;
    cell["subjects_excluded"] = c.subjects_excluded;
    cells.push_back(std::move(cell));
  }

  Json per_seed = Json::array();
  for (const auto& rec : rep.per_seed) {
    Json seed_cells = Json::array();
    for (const auto& [key, m] : rec.cells) {
      Json cell = key_json(key);
      for (const auto& f : kMetricFields) cell[f.key] = number(m.*(f.raw), f.key);
      for (const auto& [name, ptr] : kCountFields) cell[name] = m.*ptr;
      cell["tar_coarse"] = m.tar_coarse;
      seed_cells.push_back(std::move(cell));
    }
    per_seed.push_back({{"seed", rec.seed}, {"cells", std::move(seed_cells)}});
  }

  return Json{{"schema_version", r.schema_version},
              {"tool", r.tool},
              {"tool_version", r.tool_version},
              {"config_digest", rep.config_digest},
              {"config", r.config},
              {"seeds", rep.seeds},
              {"cells", std::move(cells)},
              {"per_seed", std::move(per_seed)},
              {"warnings", rep.warnings}};
}

ResultsFile from_json(const Json& j) {
  require(j.is_object(), ErrorCode::SchemaError, "results file must be a JSON object");
  require(j.contains("schema_version") && j["schema_version"].is_number_integer(), ErrorCode::SchemaVersionMismatch,
          "results file has no schema_version");
  const auto version = j["schema_version"].get<std::int64_t>();
  require(version == kSchemaVersion, ErrorCode::SchemaVersionMismatch,
          "results schema_version " + std::to_string(version) + " (supported: " + std::to_string(kSchemaVersion) +
              ")");

  ResultsFile r;
  r.schema_version = static_cast<int>(version);
  const Json& tool = field(j, "tool", "results");
  const Json& tool_version = field(j, "tool_version", "results");
  const Json& digest = field(j, "config_digest", "results");
  require(tool.is_string() && tool_version.is_string() && digest.is_string(), ErrorCode::SchemaError,
          "results: tool, tool_version and config_digest must be strings");
  r.tool = tool.get<std::string>();
  r.tool_version = tool_version.get<std::string>();
  r.report.config_digest = digest.get<std::string>();
  r.config = field(j, "config", "results");

  const Json& seeds = field(j, "seeds", "results");
  require(seeds.is_array(), ErrorCode::SchemaError, "results.seeds must be an array");
  for (const auto& s : seeds) {
    require(is_non_negative_integer(s), ErrorCode::SchemaError, "results.seeds must hold non-negative integers");
    r.report.seeds.push_back(s.get<std::uint64_t>());
  }

  const Json& cells = field(j, "cells", "results");
  require(cells.is_array(), ErrorCode::SchemaError, "results.cells must be an array");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string where = "cells[" + std::to_string(i) + "]";
    const Json& cell = cells[i];
    CellSummary c;
    const Json& metrics = field(cell, "metrics", where);
    for (const auto& f : kMetricFields) {
      const Json& m = field(metrics, f.key, where + ".metrics");
      c.*(f.stat) = Stat{get_number(m, "mean", where), get_number(m, "std", where)};
    }
    c.subjects_total = get_count(cell, "subjects_total", where);
    c.subjects_used = get_count(cell, "subjects_used", where);
    c.subjects_excluded = get_count(cell, "subjects_excluded", where);
    const CellKey key = parse_key(cell, where);
    require(!r.report.cells.count(key), ErrorCode::SchemaError, where + " repeats " + regimes::to_string(key));
    r.report.cells[key] = c;
  }

  const Json& per_seed = field(j, "per_seed", "results");
  require(per_seed.is_array(), ErrorCode::SchemaError, "results.per_seed must be an array");
  for (std::size_t i = 0; i < per_seed.size(); ++i) {
    const std::string where = "per_seed[" + std::to_string(i) + "]";
    regimes::SeedRecord rec;
    rec.seed = get_count(per_seed[i], "seed", where);
    const Json& sc = field(per_seed[i], "cells", where);
    require(sc.is_array(), ErrorCode::SchemaError, where + ".cells must be an array");
    for (std::size_t k = 0; k < sc.size(); ++k) {
      const std::string w = where + ".cells[" + std::to_string(k) + "]";
      SeedMetrics m;
      for (const auto& f : kMetricFields) m.*(f.raw) = get_number(sc[k], f.key, w);
      for (const auto& [name, ptr] : kCountFields) m.*ptr = get_count(sc[k], name, w);
      const Json& coarse = field(sc[k], "tar_coarse", w);
      require(coarse.is_boolean(), ErrorCode::SchemaError, w + ".tar_coarse must be a boolean");
      m.tar_coarse = coarse.get<bool>();
      rec.cells[parse_key(sc[k], w)] = m;
    }
    r.report.per_seed.push_back(std::move(rec));
  }

  const Json& warnings = field(j, "warnings", "results");
  require(warnings.is_array(), ErrorCode::SchemaError, "results.warnings must be an array");
  for (const auto& w : warnings) {
    require(w.is_string(), ErrorCode::SchemaError, "results.warnings must hold strings");
    r.report.warnings.push_back(w.get<std::string>());
  }
  return r;
}

std::string dump(const ResultsFile& r) { return to_json(r).dump(2) + "\n"; }

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const regimes::MetricsReport& report) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& [key, c] : report.cells) {
    out += std::string(to_string(key.first)) + "," + std::string(to_string(key.second));
    for (const auto& f : kMetricFields) {
      const Stat& s = c.*(f.stat);
      out += "," + format_number(s.mean) + "±" + format_number(s.std);
    }
    out += "\n";
  }
  return out;
}

void write_results(const ResultsFile& r, const std::filesystem::path& json_path,
                   const std::filesystem::path& csv_path) {
  ingest::write_text(json_path, dump(r));
  ingest::write_text(csv_path, to_csv(r.report));
}

ResultsFile read_results(const std::filesystem::path& path) {
  const std::string text = ingest::read_text(path);
  Json j = Json::parse(text, nullptr, false);
  require(!j.is_discarded(), ErrorCode::SchemaError, path.string() + " is not valid JSON");
  return from_json(j);
}

std::string comparison_table(const std::vector<std::pair<std::string, ResultsFile>>& runs) {
  std::set<CellKey> keys;
  for (const auto& [name, r] : runs) {
    for (const auto& [k, c] : r.report.cells) keys.insert(k);
  }
  constexpr std::size_t kw = 34, mw = 10, cw = 22;
  std::ostringstream os;
  os << pad("cell", kw) << pad("metric", mw);
  for (const auto& [name, r] : runs) os << pad(name, cw);
  os << "\n";
  for (const auto& key : keys) {
    for (const auto& f : kMetricFields) {
      os << pad(regimes::to_string(key), kw) << pad(f.label, mw);
      for (const auto& [name, r] : runs) {
        auto it = r.report.cells.find(key);
        if (it == r.report.cells.end()) {
          os << pad("-", cw);
        } else {
          const Stat& s = it->second.*(f.stat);
          os << pad(fixed(s.mean) + " ± " + fixed(s.std), cw);
        }
      }
      os << "\n";
    }
  }
  for (const auto& [name, r] : runs) {
    for (const auto& w : r.report.warnings) os << "warning (" << name << "): " << w << "\n";
  }
  return os.str();
}

std::vector<DeltaRow> match_cells(const ResultsFile& a, const ResultsFile& b) {
  std::vector<DeltaRow> rows;
  for (const auto& [key, c] : a.report.cells) {
    auto it = b.report.cells.find(key);
    if (it != b.report.cells.end()) rows.push_back({key, key, c, it->second});
  }
  if (!rows.empty()) return rows;

  auto single_regime = [](const ResultsFile& r) {
    std::set<RegimeName> names;
    for (const auto& [k, c] : r.report.cells) names.insert(k.first);
    return names.size() == 1;
  };
  if (!single_regime(a) || !single_regime(b)) return rows;
  for (const auto& [ka, ca] : a.report.cells) {
    for (const auto& [kb, cb] : b.report.cells) {
      if (ka.second == kb.second) rows.push_back({ka, kb, ca, cb});
    }
  }
  return rows;
}

std::string delta_table(const ResultsFile& a, const ResultsFile& b) {
  const auto rows = match_cells(a, b);
  require(!rows.empty(), ErrorCode::KeyMismatch, "the two results files have no comparable cells");
  std::ostringstream os;
  os << pad("A", 34) << pad("B", 34);
  for (const auto& f : kMetricFields) os << pad("d" + std::string(f.label), 11);
  os << "\n";
  for (const auto& row : rows) {
    os << pad(regimes::to_string(row.a), 34) << pad(regimes::to_string(row.b), 34);
    for (const auto& f : kMetricFields) os << pad(signed_fixed((row.second.*(f.stat)).mean - (row.first.*(f.stat)).mean), 11);
    os << "\n";
  }
  return os.str();
}

}  // namespace ecgbench::results
