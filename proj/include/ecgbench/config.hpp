// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecgbench/augment.hpp"
#include "ecgbench/dsp.hpp"

namespace ecgbench {

using Json = nlohmann::json;

/// True for integers >= 0, however the JSON value was built.
inline bool is_non_negative_integer(const Json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

enum class SegmentMode { beat, blind };
enum class EmbedderKind { morphology, mlp };
enum class Metric { cosine, euclidean, pearson };
enum class Fusion { mean, representative };
enum class PairSampling { balanced, all };
enum class Setting { closed, open };
enum class RegimeName {
  single_session,
  single_cross_session,
  ss_short_term,
  llo_short_term,
  ss_long_term,
  llo_long_term,
  cross_session,
  custom_split,
};

std::string_view to_string(SegmentMode v);
std::string_view to_string(EmbedderKind v);
std::string_view to_string(Metric v);
std::string_view to_string(Fusion v);
std::string_view to_string(PairSampling v);
std::string_view to_string(Setting v);
std::string_view to_string(RegimeName v);
/// Accepts hyphenated spellings ("single-session") as well.
std::optional<RegimeName> parse_regime(std::string_view name);
std::optional<Setting> parse_setting(std::string_view name);
std::optional<Metric> parse_metric(std::string_view name);
std::optional<Fusion> parse_fusion(std::string_view name);
std::optional<SegmentMode> parse_segment_mode(std::string_view name);
std::optional<EmbedderKind> parse_embedder(std::string_view name);
std::optional<PairSampling> parse_pair_sampling(std::string_view name);

struct TimeRange {
  double begin_s = 0.0;
  double end_s = 0.0;

  bool operator==(const TimeRange&) const = default;
};

struct DatasetSource {
  // Exactly one of these is set.
  std::optional<std::string> manifest;   // path, relative paths resolved against the config file
  std::optional<Json> synthetic;         // {"preset": name, "seed": n} or an explicit generator spec

  bool operator==(const DatasetSource&) const = default;
};

struct SegmentationSettings {
  SegmentMode mode = SegmentMode::beat;
  double pre_s = 0.2;
  double post_s = 0.4;
  double window_s = 5.0;
  double stride_s = 2.5;
  bool align_peak = true;

  bool operator==(const SegmentationSettings&) const = default;
};

struct MlpSettings {
  std::size_t hidden_dim = 64;
  double lr = 0.05;
  std::size_t epochs = 40;
  std::size_t batch = 32;

  bool operator==(const MlpSettings&) const = default;
};

struct EmbedderSettings {
  EmbedderKind kind = EmbedderKind::mlp;
  MlpSettings mlp;
  augment::AugmentSpec augment;

  bool operator==(const EmbedderSettings&) const = default;
};

struct RegimeSettings {
  std::vector<RegimeName> names{RegimeName::single_session};
  std::vector<Setting> settings{Setting::closed, Setting::open};
  std::optional<std::string> enroll_session;
  std::optional<std::string> probe_session;
  std::optional<TimeRange> enroll_range;
  std::optional<TimeRange> probe_range;
  double open_ratio = 0.5;
  double single_session_enroll_fraction = 0.7;

  bool operator==(const RegimeSettings&) const = default;
};

struct EvaluationSettings {
  Metric metric = Metric::cosine;
  std::optional<std::size_t> template_size;   // nullopt = all
  Fusion template_fusion = Fusion::mean;
  std::size_t probe_fusion_k = 3;
  PairSampling pair_sampling = PairSampling::balanced;
  double far_target = 0.001;

  bool operator==(const EvaluationSettings&) const = default;
};

struct RunConfig {
  DatasetSource dataset;
  dsp::PreprocessSettings preprocess;
  SegmentationSettings segmentation;
  EmbedderSettings embedder;
  RegimeSettings regime;
  EvaluationSettings evaluation;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};

  bool operator==(const RunConfig&) const = default;
};

/// Fills defaults and checks consistency. Throws UnknownField, InconsistentSettings, EmptySeeds,
/// or SchemaError for type errors.
RunConfig validate_config(const Json& raw);

/// Fully explicit JSON form; validate_config(to_json(c)) == c.
Json to_json(const RunConfig& cfg);

/// Hex FNV-1a digest of the canonical JSON.
std::string config_digest(const RunConfig& cfg);

}  // namespace ecgbench
