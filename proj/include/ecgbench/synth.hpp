// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecgbench/ingest.hpp"
#include "ecgbench/types.hpp"

namespace ecgbench::synth {

/// One Gaussian bump; the centre is relative to the R peak.
struct Wave {
  double amplitude = 0.0;  // mV
  double center_s = 0.0;
  double width_s = 0.01;

  bool operator==(const Wave&) const = default;
};

enum WaveIndex : std::size_t { P = 0, Q = 1, R = 2, S = 3, T = 4 };

struct SubjectMorphology {
  std::array<Wave, 5> waves;  // P, Q, R, S, T
  double heart_rate_bpm = 70.0;

  bool operator==(const SubjectMorphology&) const = default;
};

struct SessionEffects {
  double drift = 0.0;        // per-session multiplicative perturbation scale
  double drift_rate = 0.0;   // progressive perturbation per 30 days, along a fixed per-subject direction
  double noise_sigma = 0.0;  // mV
  double baseline_amp = 0.0; // mV
  double baseline_freq = 0.3;
  double amplitude_scale = 1.0;
  unsigned day_index = 0;
  unsigned record_index = 0;
  std::string session_id = "s1";
  std::uint64_t realization = 0;  // selects the RR-jitter, wander-phase and noise streams

  bool operator==(const SessionEffects&) const = default;
};

/// Textbook-like morphology at 70 bpm.
SubjectMorphology default_morphology();

/// Seeded draw: R 0.8-1.4 mV, HR 55-90 bpm, other waves within physiological ranges.
SubjectMorphology make_subject_params(std::uint64_t seed);

/// round(rr * fs) samples with the R centre at 40% of the beat.
Signal synthesize_beat(const SubjectMorphology& theta, double fs, double rr);

/// Morphology seen in one session: every parameter scaled by
/// clamp(1 + drift * u + drift_rate * day / 30 * v, 0.5, 1.5), u seeded by (seed, session), v by seed.
SubjectMorphology session_morphology(const SubjectMorphology& theta, const SessionEffects& effects, std::uint64_t seed);

struct SyntheticRecord {
  Recording recording;              // float32-representable samples
  std::vector<std::size_t> true_peaks;
  Signal clean;                     // recording without the additive noise
};

/// Beats placed back to back with +-3% uniform RR jitter, then gain, wander and noise. True peaks are
/// the argmax of the clean signal within 10 ms of each nominal R centre.
SyntheticRecord synthesize_record(const SubjectMorphology& theta, const SessionEffects& effects, double duration_s,
                                  double fs, std::uint64_t seed, const std::string& subject_id = "S001");

struct DatasetSpec {
  std::size_t n_subjects = 2;
  std::vector<SessionEffects> sessions;
  double duration_s = 60.0;
  double fs = 360.0;

  bool operator==(const DatasetSpec&) const = default;
};

std::vector<std::string> preset_names();
/// fallacy30, aging4, ablation. Throws InvalidArgument for other names.
DatasetSpec preset(std::string_view name);

nlohmann::json to_json(const DatasetSpec& spec);
/// Throws SchemaError.
DatasetSpec spec_from_json(const nlohmann::json& j);

std::string subject_name(std::size_t i);

struct SyntheticDataset {
  ingest::DatasetIndex index;  // paths relative to the dataset directory
  std::vector<SyntheticRecord> records;  // aligned with index.records
};

/// In-memory dataset; parallel over records. Throws InvalidArgument for fewer than 2 subjects or no sessions.
SyntheticDataset synthesize_dataset(const DatasetSpec& spec, std::uint64_t seed);
SyntheticDataset synthesize_dataset_serial(const DatasetSpec& spec, std::uint64_t seed);

/// Writes signals/*.f32, truth/*.json, manifest.json and generator.json under `out_dir`.
/// Throws IoError.
ingest::DatasetIndex generate_dataset(const DatasetSpec& spec, std::uint64_t seed,
                                      const std::filesystem::path& out_dir);

}  // namespace ecgbench::synth
