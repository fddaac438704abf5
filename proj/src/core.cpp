// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <string>

#include "ecgbench/config.hpp"
#include "ecgbench/error.hpp"
#include "ecgbench/types.hpp"

namespace ecgbench {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::InconsistentSettings: return "InconsistentSettings";
    case ErrorCode::EmptySeeds: return "EmptySeeds";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DuplicateRecordKey: return "DuplicateRecordKey";
    case ErrorCode::MalformedHeaderLine: return "MalformedHeaderLine";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::ZeroGain: return "ZeroGain";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatMismatch: return "FormatMismatch";
    case ErrorCode::BandOutOfRange: return "BandOutOfRange";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::NoPeaksDetected: return "NoPeaksDetected";
    case ErrorCode::WindowLongerThanSignal: return "WindowLongerThanSignal";
    case ErrorCode::WindowTooLong: return "WindowTooLong";
    case ErrorCode::ConstantSignal: return "ConstantSignal";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyEnrollment: return "EmptyEnrollment";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ConstantVector: return "ConstantVector";
    case ErrorCode::NoGenuinePairs: return "NoGenuinePairs";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::ZeroPooledVariance: return "ZeroPooledVariance";
    case ErrorCode::TooFewScores: return "TooFewScores";
    case ErrorCode::TrueSubjectMissing: return "TrueSubjectMissing";
    case ErrorCode::RegimeUnsatisfiable: return "RegimeUnsatisfiable";
    case ErrorCode::TooFewSubjects: return "TooFewSubjects";
    case ErrorCode::OverlappingRanges: return "OverlappingRanges";
    case ErrorCode::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorCode::KeyMismatch: return "KeyMismatch";
    case ErrorCode::LeakageDetected: return "LeakageDetected";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
  }
  return "Unknown";
}

void validate_recording(const Recording& rec) {
  require(rec.fs > 0.0, ErrorCode::InvalidArgument, "sampling rate must be positive");
  require(!rec.channels.empty(), ErrorCode::InvalidArgument, "recording has no channels");
  const std::size_t n = rec.channels.front().size();
  require(n >= 1, ErrorCode::InvalidArgument, "recording has no samples");
  for (const auto& ch : rec.channels) {
    require(ch.size() == n, ErrorCode::InvalidArgument, "channels differ in length");
  }
}

namespace {

template <class E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<std::string_view, E>, N>& table, std::string_view name) {
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  return std::nullopt;
}

template <class E, std::size_t N>
std::string_view name_of(const std::array<std::pair<std::string_view, E>, N>& table, E value) {
  for (const auto& [key, v] : table) {
    if (v == value) return key;
  }
  return "unknown";
}

constexpr std::array<std::pair<std::string_view, RegimeName>, 8> kRegimes{{
    {"single_session", RegimeName::single_session},
    {"single_cross_session", RegimeName::single_cross_session},
    {"ss_short_term", RegimeName::ss_short_term},
    {"llo_short_term", RegimeName::llo_short_term},
    {"ss_long_term", RegimeName::ss_long_term},
    {"llo_long_term", RegimeName::llo_long_term},
    {"cross_session", RegimeName::cross_session},
    {"custom_split", RegimeName::custom_split},
}};
constexpr std::array<std::pair<std::string_view, Setting>, 2> kSettings{{
    {"closed", Setting::closed}, {"open", Setting::open}}};
constexpr std::array<std::pair<std::string_view, Metric>, 3> kMetrics{{
    {"cosine", Metric::cosine}, {"euclidean", Metric::euclidean}, {"pearson", Metric::pearson}}};
constexpr std::array<std::pair<std::string_view, Fusion>, 2> kFusions{{
    {"mean", Fusion::mean}, {"representative", Fusion::representative}}};
constexpr std::array<std::pair<std::string_view, SegmentMode>, 2> kModes{{
    {"beat", SegmentMode::beat}, {"blind", SegmentMode::blind}}};
constexpr std::array<std::pair<std::string_view, EmbedderKind>, 2> kEmbedders{{
    {"morphology", EmbedderKind::morphology}, {"mlp", EmbedderKind::mlp}}};
constexpr std::array<std::pair<std::string_view, PairSampling>, 2> kSampling{{
    {"balanced", PairSampling::balanced}, {"all", PairSampling::all}}};

}  // namespace

std::string_view to_string(SegmentMode v) { return name_of(kModes, v); }
std::string_view to_string(EmbedderKind v) { return name_of(kEmbedders, v); }
std::string_view to_string(Metric v) { return name_of(kMetrics, v); }
std::string_view to_string(Fusion v) { return name_of(kFusions, v); }
std::string_view to_string(PairSampling v) { return name_of(kSampling, v); }
std::string_view to_string(Setting v) { return name_of(kSettings, v); }
std::string_view to_string(RegimeName v) { return name_of(kRegimes, v); }

std::optional<RegimeName> parse_regime(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '-', '_');
  return lookup(kRegimes, s);
}
std::optional<Setting> parse_setting(std::string_view name) { return lookup(kSettings, name); }
std::optional<Metric> parse_metric(std::string_view name) { return lookup(kMetrics, name); }
std::optional<Fusion> parse_fusion(std::string_view name) { return lookup(kFusions, name); }
std::optional<SegmentMode> parse_segment_mode(std::string_view name) { return lookup(kModes, name); }
std::optional<EmbedderKind> parse_embedder(std::string_view name) { return lookup(kEmbedders, name); }
std::optional<PairSampling> parse_pair_sampling(std::string_view name) { return lookup(kSampling, name); }

}  // namespace ecgbench
