// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecgbench/config.hpp"
#include "ecgbench/ingest.hpp"
#include "ecgbench/segment.hpp"

namespace ecgbench::regimes {

struct RegimeSpec {
  RegimeName name = RegimeName::single_session;
  Setting setting = Setting::closed;
  std::optional<std::string> enroll_session;
  std::optional<std::string> probe_session;
  std::optional<TimeRange> enroll_range;
  std::optional<TimeRange> probe_range;
  double open_ratio = 0.5;
  double enroll_fraction = 0.7;  // single_session beat split
  std::uint64_t seed = 0;
};

RegimeSpec make_spec(const RegimeSettings& settings, RegimeName name, Setting setting, std::uint64_t seed);

/// A whole record, or a time range of it.
struct Portion {
  std::size_t record = 0;  // index into DatasetIndex::records
  std::optional<TimeRange> range;
};

struct SubjectSplit {
  std::string subject_id;
  std::vector<Portion> enroll;
  std::vector<Portion> probe;
  /// single_session: enroll and probe name the same record and its beats are divided by split_beats.
  bool beat_split = false;
};

struct Exclusion {
  std::string subject_id;
  std::string reason;
};

struct SplitPlan {
  RegimeSpec spec;
  std::vector<SubjectSplit> subjects;  // every qualifying subject, sorted by id
  std::vector<Exclusion> excluded;
  std::vector<std::string> training_subjects;
  std::vector<std::string> evaluation_subjects;
  std::size_t subjects_total = 0;

  const SubjectSplit& split_of(const std::string& subject) const;
};

/// Table-driven enrollment/probe assignment. Subjects that cannot satisfy the regime are listed in
/// `excluded`. Throws RegimeUnsatisfiable when none qualifies, TooFewSubjects when an open split is
/// impossible.
SplitPlan map_regime(const ingest::DatasetIndex& index, const RegimeSpec& spec);

/// Seeded shuffle of the sorted ids, split at round(ratio * N) clamped to [1, N - 1].
std::pair<std::vector<std::string>, std::vector<std::string>> subject_partition(std::vector<std::string> subjects,
                                                                                 double ratio, std::uint64_t seed);

/// Positions (ascending) of the enrollment beats among n beats: round(fraction * n) of a seeded shuffle.
std::vector<std::size_t> split_beats(std::size_t n, double fraction, std::uint64_t seed);

/// Half-open sample ranges [round(t0 fs), round(t1 fs)). Throws OverlappingRanges, RangeOutOfBounds.
std::pair<Recording, Recording> temporal_windows(const Recording& rec, TimeRange enroll, TimeRange probe);

// ---------------------------------------------------------------------------
// Pipeline

struct PreparedRecord {
  Provenance provenance;
  double fs = 0.0;
  std::size_t length = 0;
  std::vector<segment::BeatSegment> segments;  // in time order
  std::vector<std::vector<double>> inputs;     // prepare_beat of each segment
};

struct PreparedDataset {
  ingest::DatasetIndex index;
  std::vector<PreparedRecord> records;  // aligned with index.records
};

/// preprocess -> detect -> segment -> prepare, parallel over records.
PreparedDataset prepare_dataset(const ingest::DatasetIndex& index, const std::vector<Recording>& recordings,
                                const RunConfig& cfg);
PreparedDataset prepare_dataset_serial(const ingest::DatasetIndex& index, const std::vector<Recording>& recordings,
                                       const RunConfig& cfg);

/// Loads or synthesises the configured dataset; relative manifest paths resolve against `base_dir`.
std::pair<ingest::DatasetIndex, std::vector<Recording>> load_source(const DatasetSource& source,
                                                                   const std::filesystem::path& base_dir = {});

struct SegmentRef {
  std::size_t record = 0;
  std::size_t segment = 0;
};

/// The segments each side of a plan actually uses.
struct Assignment {
  std::string subject_id;
  std::vector<SegmentRef> enroll;
  std::vector<std::vector<SegmentRef>> probe_groups;  // one group per probe portion
};

std::vector<Assignment> materialize(const SplitPlan& plan, const PreparedDataset& data);

/// Structural checks: enrollment and probe sample ranges of a subject never intersect (peak sets for
/// beat splits), and open-setting training subjects are disjoint from evaluation subjects.
/// Returns the violations found.
std::vector<std::string> find_leakage(const SplitPlan& plan, const std::vector<Assignment>& assignments,
                                      const PreparedDataset& data);

struct SeedMetrics {
  double rank1 = 0.0;
  double rank5 = 0.0;
  double eer = 0.0;
  double auc = 0.0;
  double dprime = 0.0;
  double tar = 0.0;
  bool tar_coarse = false;
  std::size_t probes = 0;
  std::size_t genuine_pairs = 0;
  std::size_t impostor_pairs = 0;
  std::size_t subjects_total = 0;
  std::size_t subjects_used = 0;
  std::size_t subjects_excluded = 0;
  std::size_t training_subjects = 0;
  std::size_t evaluation_subjects = 0;
};

using CellKey = std::pair<RegimeName, Setting>;

std::string to_string(const CellKey& key);

/// One (regime, setting) cell for one seed.
SeedMetrics evaluate_cell(const PreparedDataset& data, const RunConfig& cfg, RegimeName regime, Setting setting,
                          std::uint64_t seed);

/// All configured cells for one seed.
std::map<CellKey, SeedMetrics> run_evaluation(const PreparedDataset& data, const RunConfig& cfg, std::uint64_t seed);
std::map<CellKey, SeedMetrics> run_evaluation(const RunConfig& cfg, std::uint64_t seed,
                                              const std::filesystem::path& base_dir = {});

struct Stat {
  double mean = 0.0;
  double std = 0.0;
};

struct CellSummary {
  Stat rank1, rank5, eer, auc, dprime, tar;
  std::size_t subjects_total = 0;
  std::size_t subjects_used = 0;
  std::size_t subjects_excluded = 0;
};

struct SeedRecord {
  std::uint64_t seed = 0;
  std::map<CellKey, SeedMetrics> cells;
};

struct MetricsReport {
  std::map<CellKey, CellSummary> cells;
  std::vector<SeedRecord> per_seed;
  std::vector<std::string> warnings;
  std::string config_digest;
  std::vector<std::uint64_t> seeds;
};

Stat mean_std(const std::vector<double>& values);

/// Mean and sample std per metric. Throws KeyMismatch when seeds disagree on the cell set.
MetricsReport aggregate_runs(const std::vector<SeedRecord>& records);

/// Every seed x cell unit in parallel (each unit runs serially, writing its own slot). The result
/// does not depend on the thread count.
MetricsReport run_all(const PreparedDataset& data, const RunConfig& cfg);

}  // namespace ecgbench::regimes
