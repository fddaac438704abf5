// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <tuple>

#include "ecgbench/config.hpp"
#include "ecgbench/error.hpp"
#include "ecgbench/random.hpp"

namespace ecgbench::synth {

namespace fs = std::filesystem;
using nlohmann::json;

SubjectMorphology default_morphology() {
  SubjectMorphology m;
  m.waves[P] = {0.15, -0.20, 0.025};
  m.waves[Q] = {-0.12, -0.035, 0.010};
  m.waves[R] = {1.00, 0.0, 0.010};
  m.waves[S] = {-0.25, 0.035, 0.010};
  m.waves[T] = {0.30, 0.26, 0.050};
  m.heart_rate_bpm = 70.0;
  return m;
}

SubjectMorphology make_subject_params(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "morphology"));
  SubjectMorphology m;
  // Draw order is part of the contract: changing it changes every synthetic dataset.
  m.waves[P] = {uniform(rng, 0.08, 0.25), uniform(rng, -0.22, -0.14), uniform(rng, 0.018, 0.035)};
  m.waves[Q] = {uniform(rng, -0.25, -0.05), uniform(rng, -0.050, -0.028), uniform(rng, 0.007, 0.014)};
  m.waves[R] = {uniform(rng, 0.8, 1.4), 0.0, uniform(rng, 0.008, 0.014)};
  m.waves[S] = {uniform(rng, -0.40, -0.10), uniform(rng, 0.028, 0.050), uniform(rng, 0.007, 0.016)};
  m.waves[T] = {uniform(rng, 0.15, 0.45), uniform(rng, 0.20, 0.32), uniform(rng, 0.035, 0.070)};
  m.heart_rate_bpm = uniform(rng, 55.0, 90.0);
  return m;
}

namespace {

double wave_value(const Wave& w, double dt) {
  const double z = (dt - w.center_s) / w.width_s;
  return w.amplitude * std::exp(-0.5 * z * z);
}

constexpr std::size_t kParams = 16;

std::array<double, kParams> flatten(const SubjectMorphology& m) {
  std::array<double, kParams> p{};
  for (std::size_t k = 0; k < 5; ++k) {
    p[3 * k] = m.waves[k].amplitude;
    p[3 * k + 1] = m.waves[k].center_s;
    p[3 * k + 2] = m.waves[k].width_s;
  }
  p[15] = m.heart_rate_bpm;
  return p;
}

SubjectMorphology unflatten(const std::array<double, kParams>& p) {
  SubjectMorphology m;
  for (std::size_t k = 0; k < 5; ++k) m.waves[k] = {p[3 * k], p[3 * k + 1], p[3 * k + 2]};
  m.heart_rate_bpm = p[15];
  return m;
}

}  // namespace

Signal synthesize_beat(const SubjectMorphology& theta, double fs, double rr) {
  require(fs > 0.0 && rr > 0.0, ErrorCode::InvalidArgument, "fs and rr must be positive");
  const auto n = static_cast<std::size_t>(std::llround(rr * fs));
  const double t_r = 0.4 * rr;
  Signal beat(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(i) / fs - t_r;
    for (const auto& w : theta.waves) beat[i] += wave_value(w, dt);
  }
  return beat;
}

SubjectMorphology session_morphology(const SubjectMorphology& theta, const SessionEffects& effects,
                                     std::uint64_t seed) {
  require(effects.drift >= 0.0 && effects.drift_rate >= 0.0, ErrorCode::InvalidArgument, "drift must be >= 0");
  if (effects.drift == 0.0 && effects.drift_rate == 0.0) return theta;
  Rng session_rng(derive_seed(seed, "session", effects.session_id));
  Rng trend_rng(derive_seed(seed, "trend"));
  const double trend = effects.drift_rate * static_cast<double>(effects.day_index) / 30.0;
  auto p = flatten(theta);
  for (auto& v : p) {
    const double u = uniform(session_rng, -1.0, 1.0);
    const double w = uniform(trend_rng, -1.0, 1.0);
    v *= std::clamp(1.0 + effects.drift * u + trend * w, 0.5, 1.5);
  }
  return unflatten(p);
}

SyntheticRecord synthesize_record(const SubjectMorphology& theta, const SessionEffects& effects, double duration_s,
                                  double fs, std::uint64_t seed, const std::string& subject_id) {
  require(duration_s > 0.0 && fs > 0.0, ErrorCode::InvalidArgument, "duration and fs must be positive");
  require(effects.noise_sigma >= 0.0, ErrorCode::InvalidArgument, "noise_sigma must be >= 0");
  require(effects.amplitude_scale > 0.0, ErrorCode::InvalidArgument, "amplitude_scale must be positive");
  const SubjectMorphology m = session_morphology(theta, effects, seed);
  const auto n = static_cast<std::size_t>(std::llround(duration_s * fs));
  require(n >= 1, ErrorCode::InvalidArgument, "record shorter than one sample");

  Signal clean(n, 0.0);
  std::vector<double> centres;
  Rng rr_rng(derive_seed(seed, "rr", effects.realization));
  const double rr0 = 60.0 / m.heart_rate_bpm;
  for (double start = 0.0; start < duration_s;) {
    const double rr = rr0 * (1.0 + uniform(rr_rng, -0.03, 0.03));
    const double t_r = start + 0.4 * rr;
    centres.push_back(t_r);
    for (const auto& w : m.waves) {
      const double reach = 6.0 * w.width_s;
      const double t0 = t_r + w.center_s - reach;
      const double t1 = t_r + w.center_s + reach;
      const auto i0 = static_cast<std::ptrdiff_t>(std::ceil(std::max(0.0, t0) * fs));
      const auto i1 = std::min(static_cast<std::ptrdiff_t>(n) - 1, static_cast<std::ptrdiff_t>(std::floor(t1 * fs)));
      for (std::ptrdiff_t i = i0; i <= i1; ++i) {
        clean[static_cast<std::size_t>(i)] += wave_value(w, static_cast<double>(i) / fs - t_r);
      }
    }
    start += rr;
  }

  Rng wander_rng(derive_seed(seed, "wander", effects.realization));
  const double phase = uniform(wander_rng, 0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    clean[i] = effects.amplitude_scale * clean[i] +
               effects.baseline_amp * std::sin(2.0 * std::numbers::pi * effects.baseline_freq * t + phase);
  }

  SyntheticRecord out;
  out.recording.provenance = {subject_id, effects.session_id, effects.day_index, effects.record_index};
  out.recording.fs = fs;
  Signal noisy(n);
  Rng noise_rng(derive_seed(seed, "noise", effects.realization));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = effects.noise_sigma > 0.0 ? effects.noise_sigma * gauss(noise_rng) : 0.0;
    noisy[i] = static_cast<float>(clean[i] + e);
  }
  out.recording.channels.push_back(std::move(noisy));

  const auto half = static_cast<std::ptrdiff_t>(std::llround(0.010 * fs));
  for (double t_r : centres) {
    const auto c = static_cast<std::ptrdiff_t>(std::llround(t_r * fs));
    if (c >= static_cast<std::ptrdiff_t>(n)) continue;
    const auto lo = std::max<std::ptrdiff_t>(0, c - half);
    const auto hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1, c + half);
    auto best = lo;
    for (auto i = lo + 1; i <= hi; ++i) {
      if (clean[static_cast<std::size_t>(i)] > clean[static_cast<std::size_t>(best)]) best = i;
    }
    out.true_peaks.push_back(static_cast<std::size_t>(best));
  }
  out.clean = std::move(clean);
  return out;
}

// ---------------------------------------------------------------------------
// Dataset specs

std::vector<std::string> preset_names() { return {"fallacy30", "aging4", "ablation"}; }

DatasetSpec preset(std::string_view name) {
  DatasetSpec spec;
  spec.n_subjects = 30;
  spec.duration_s = 60.0;
  spec.fs = 360.0;
  SessionEffects base;
  base.baseline_amp = 0.1;
  base.baseline_freq = 0.3;
  if (name == "fallacy30") {
    base.drift = 0.15;
    base.noise_sigma = 0.05;
    for (auto [id, day] : {std::pair{"s1", 0u}, std::pair{"s2", 7u}}) {
      SessionEffects s = base;
      s.session_id = id;
      s.day_index = day;
      spec.sessions.push_back(s);
    }
  } else if (name == "aging4") {
    base.drift = 0.15;
    base.drift_rate = 0.05;
    base.noise_sigma = 0.05;
    const std::array<unsigned, 4> days{0, 10, 20, 40};
    for (std::size_t k = 0; k < days.size(); ++k) {
      SessionEffects s = base;
      s.session_id = "s" + std::to_string(k + 1);
      s.day_index = days[k];
      spec.sessions.push_back(s);
    }
  } else if (name == "ablation") {
    base.drift = 0.10;
    base.noise_sigma = 0.08;
    const std::array<double, 2> gains{0.8, 1.25};
    for (std::size_t k = 0; k < gains.size(); ++k) {
      SessionEffects s = base;
      s.session_id = "s" + std::to_string(k + 1);
      s.record_index = static_cast<unsigned>(k);
      s.amplitude_scale = gains[k];
      spec.sessions.push_back(s);
    }
  } else {
    fail(ErrorCode::InvalidArgument, "unknown preset '" + std::string(name) + "'");
  }
  return spec;
}

json to_json(const DatasetSpec& spec) {
  json sessions = json::array();
  for (const auto& s : spec.sessions) {
    sessions.push_back({{"session_id", s.session_id},
                        {"day_index", s.day_index},
                        {"record_index", s.record_index},
                        {"drift", s.drift},
                        {"drift_rate", s.drift_rate},
                        {"noise_sigma", s.noise_sigma},
                        {"baseline_amp", s.baseline_amp},
                        {"baseline_freq", s.baseline_freq},
                        {"amplitude_scale", s.amplitude_scale}});
  }
  return {{"n_subjects", spec.n_subjects}, {"duration_s", spec.duration_s}, {"fs", spec.fs}, {"sessions", sessions}};
}

namespace {

void check_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  require(j.is_object(), ErrorCode::SchemaError, where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    require(known.count(key) > 0, ErrorCode::SchemaError, where + ": unknown field '" + key + "'");
  }
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  require(j[key].is_number(), ErrorCode::SchemaError, where + "." + key + " must be a number");
  return j[key].get<double>();
}

unsigned unsigned_or(const json& j, const char* key, unsigned fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  require(is_non_negative_integer(j[key]), ErrorCode::SchemaError, where + "." + key + " must be a non-negative integer");
  return j[key].get<unsigned>();
}

bool valid_id(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

}  // namespace

DatasetSpec spec_from_json(const json& j) {
  check_keys(j, {"n_subjects", "duration_s", "fs", "sessions"}, "synthetic spec");
  DatasetSpec spec;
  spec.n_subjects = unsigned_or(j, "n_subjects", 2, "synthetic spec");
  spec.duration_s = number_or(j, "duration_s", spec.duration_s, "synthetic spec");
  spec.fs = number_or(j, "fs", spec.fs, "synthetic spec");
  require(j.contains("sessions") && j["sessions"].is_array(), ErrorCode::SchemaError,
          "synthetic spec.sessions must be an array");
  for (std::size_t i = 0; i < j["sessions"].size(); ++i) {
    const json& e = j["sessions"][i];
    const std::string where = "sessions[" + std::to_string(i) + "]";
    check_keys(e,
               {"session_id", "day_index", "record_index", "drift", "drift_rate", "noise_sigma", "baseline_amp",
                "baseline_freq", "amplitude_scale"},
               where);
    SessionEffects s;
    if (e.contains("session_id")) {
      require(e["session_id"].is_string() && valid_id(e["session_id"].get<std::string>()), ErrorCode::SchemaError,
              where + ".session_id must be a non-empty [A-Za-z0-9_-] string");
      s.session_id = e["session_id"].get<std::string>();
    } else {
      s.session_id = "s" + std::to_string(i + 1);
    }
    s.day_index = unsigned_or(e, "day_index", 0, where);
    s.record_index = unsigned_or(e, "record_index", 0, where);
    s.drift = number_or(e, "drift", 0.0, where);
    s.drift_rate = number_or(e, "drift_rate", 0.0, where);
    s.noise_sigma = number_or(e, "noise_sigma", 0.0, where);
    s.baseline_amp = number_or(e, "baseline_amp", 0.0, where);
    s.baseline_freq = number_or(e, "baseline_freq", 0.3, where);
    s.amplitude_scale = number_or(e, "amplitude_scale", 1.0, where);
    require(s.drift >= 0.0 && s.drift_rate >= 0.0 && s.noise_sigma >= 0.0 && s.amplitude_scale > 0.0,
            ErrorCode::SchemaError, where + ": drift, drift_rate, noise_sigma >= 0 and amplitude_scale > 0");
    spec.sessions.push_back(s);
  }
  return spec;
}

std::string subject_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "S%03zu", i + 1);
  return buf;
}

// ---------------------------------------------------------------------------
// Datasets

namespace {

void check_spec(const DatasetSpec& spec) {
  require(spec.n_subjects >= 2, ErrorCode::InvalidArgument, "a dataset needs at least 2 subjects");
  require(!spec.sessions.empty(), ErrorCode::InvalidArgument, "a dataset needs at least one session");
  require(spec.duration_s > 0.0 && spec.fs > 0.0, ErrorCode::InvalidArgument, "duration_s and fs must be positive");
  std::set<std::tuple<std::string, unsigned, unsigned>> keys;
  for (const auto& s : spec.sessions) {
    require(valid_id(s.session_id), ErrorCode::InvalidArgument, "session ids must be [A-Za-z0-9_-]");
    require(keys.emplace(s.session_id, s.day_index, s.record_index).second, ErrorCode::InvalidArgument,
            "session '" + s.session_id + "' listed twice with the same day and record index");
  }
}

std::string record_stem(const Provenance& p) {
  return p.subject_id + "_" + p.session_id + "_d" + std::to_string(p.day_index) + "_r" + std::to_string(p.record_index);
}

SyntheticRecord make_record(const DatasetSpec& spec, std::uint64_t seed, std::size_t subject, std::size_t session) {
  const std::uint64_t subject_seed = derive_seed(seed, "subject", subject);
  SessionEffects effects = spec.sessions[session];
  effects.realization = session + 1;
  return synthesize_record(make_subject_params(subject_seed), effects, spec.duration_s, spec.fs, subject_seed,
                           subject_name(subject));
}

SyntheticDataset assemble(const DatasetSpec& spec, std::vector<SyntheticRecord> records) {
  SyntheticDataset out;
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = records[a].recording.provenance;
    const auto& pb = records[b].recording.provenance;
    return std::tie(pa.subject_id, pa.day_index, pa.record_index, pa.session_id) <
           std::tie(pb.subject_id, pb.day_index, pb.record_index, pb.session_id);
  });
  for (auto i : order) {
    const auto& p = records[i].recording.provenance;
    ingest::RecordMeta meta;
    meta.subject_id = p.subject_id;
    meta.session_id = p.session_id;
    meta.day_index = p.day_index;
    meta.record_index = p.record_index;
    meta.path = fs::path("signals") / (record_stem(p) + ".f32");
    meta.format = ingest::RecordFormat::f32le;
    meta.fs = spec.fs;
    out.index.records.push_back(std::move(meta));
    out.records.push_back(std::move(records[i]));
  }
  return out;
}

}  // namespace

SyntheticDataset synthesize_dataset_serial(const DatasetSpec& spec, std::uint64_t seed) {
  check_spec(spec);
  std::vector<SyntheticRecord> records;
  for (std::size_t s = 0; s < spec.n_subjects; ++s) {
    for (std::size_t k = 0; k < spec.sessions.size(); ++k) records.push_back(make_record(spec, seed, s, k));
  }
  return assemble(spec, std::move(records));
}

SyntheticDataset synthesize_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  check_spec(spec);
  const std::size_t per_subject = spec.sessions.size();
  std::vector<SyntheticRecord> records(spec.n_subjects * per_subject);
  const auto n = static_cast<std::ptrdiff_t>(records.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    records[u] = make_record(spec, seed, u / per_subject, u % per_subject);
  }
  return assemble(spec, std::move(records));
}

ingest::DatasetIndex generate_dataset(const DatasetSpec& spec, std::uint64_t seed, const fs::path& out_dir) {
  SyntheticDataset data = synthesize_dataset(spec, seed);
  std::error_code ec;
  fs::create_directories(out_dir / "signals", ec);
  require(!ec, ErrorCode::IoError, "cannot create '" + (out_dir / "signals").string() + "': " + ec.message());
  fs::create_directories(out_dir / "truth", ec);
  require(!ec, ErrorCode::IoError, "cannot create '" + (out_dir / "truth").string() + "': " + ec.message());

  ingest::DatasetIndex index = data.index;
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    auto& meta = index.records[i];
    meta.path = out_dir / meta.path;
    ingest::write_f32le(meta.path, data.records[i].recording.channels.front());
    const json truth = {{"peaks", data.records[i].true_peaks}};
    ingest::write_text(out_dir / "truth" / (meta.path.stem().string() + ".json"), truth.dump() + "\n");
  }
  ingest::write_text(out_dir / "manifest.json", ingest::manifest_json(index, out_dir).dump(2) + "\n");
  const json generator = {{"seed", seed}, {"spec", to_json(spec)}};
  ingest::write_text(out_dir / "generator.json", generator.dump(2) + "\n");
  return index;
}

}  // namespace ecgbench::synth
