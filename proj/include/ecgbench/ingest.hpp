// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecgbench/types.hpp"

namespace ecgbench::ingest {

enum class RecordFormat { f32le, csv, wfdb };

std::string_view to_string(RecordFormat f);
std::optional<RecordFormat> parse_record_format(std::string_view name);

struct RecordMeta {
  std::string subject_id;
  std::string session_id;
  unsigned day_index = 0;
  unsigned record_index = 0;
  std::filesystem::path path;  // resolved against the manifest directory
  RecordFormat format = RecordFormat::f32le;
  std::optional<double> fs;    // absent for wfdb
  std::optional<std::size_t> channel;

  Provenance provenance() const { return {subject_id, session_id, day_index, record_index}; }
};

/// Records sorted by (subject, day, record_index), then session and path.
struct DatasetIndex {
  std::vector<RecordMeta> records;

  std::vector<std::string> subjects() const;
};

/// Manifest JSON: {"records": [{subject, session, day | date, record_index?, path, format, fs?, channel?}]}.
/// `date` (YYYY-MM-DD) becomes days since the subject's first date; with neither field the day is 0.
/// A missing record_index is assigned in declaration order within (subject, day).
/// Throws SchemaError, DuplicateRecordKey.
DatasetIndex parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});
DatasetIndex load_manifest(const std::filesystem::path& path);

/// Inverse of parse_manifest for records whose paths live under `base_dir`.
nlohmann::json manifest_json(const DatasetIndex& index, const std::filesystem::path& base_dir);

struct WfdbSignal {
  std::string filename;
  int format = 0;
  double adc_gain = 200.0;  // adu per mV
  double baseline = 0.0;    // adu
  std::string units = "mV";
  int adc_resolution = 0;
  int adc_zero = 0;
  std::string description;
};

struct WfdbHeader {
  std::string record_name;
  std::size_t n_signals = 0;
  double fs = 250.0;
  std::size_t n_samples = 0;  // 0 when the header leaves it out
  std::vector<WfdbSignal> signals;
};

/// Record line plus one line per signal; '#' comments and blank lines are skipped. A missing fs
/// defaults to 250 Hz and a missing or zero gain to 200 adu/mV. Multi-segment records, frame
/// multipliers, skews and byte offsets throw MalformedHeaderLine; formats other than 212 and 16
/// throw UnsupportedFormat.
WfdbHeader parse_wfdb_header(std::string_view text);

using AdcSamples = std::vector<std::vector<std::int32_t>>;

/// De-interleaves samples round-robin over `n_signals`. Throws TruncatedData, UnsupportedFormat.
AdcSamples decode_wfdb_samples(std::span<const std::uint8_t> bytes, int format, std::size_t n_signals);

/// Interleaves and packs; values must fit the format (12- or 16-bit two's complement).
std::vector<std::uint8_t> encode_wfdb_samples(const AdcSamples& signals, int format);

/// (adc - baseline) / gain. Throws ZeroGain.
Signal adc_to_physical(std::span<const std::int32_t> adc, double gain, double baseline);

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

Signal read_f32le(const std::filesystem::path& path);
void write_f32le(const std::filesystem::path& path, std::span<const double> samples);
Signal read_csv_signal(const std::filesystem::path& path);

/// Throws IoError, FormatMismatch.
Recording load_record(const RecordMeta& meta);

/// All records in index order; parallel over records.
std::vector<Recording> load_dataset(const DatasetIndex& index);
std::vector<Recording> load_dataset_serial(const DatasetIndex& index);

}  // namespace ecgbench::ingest
