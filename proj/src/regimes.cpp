// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>

#include "ecgbench/augment.hpp"
#include "ecgbench/biometric.hpp"
#include "ecgbench/dsp.hpp"
#include "ecgbench/embed.hpp"
#include "ecgbench/error.hpp"
#include "ecgbench/metrics.hpp"
#include "ecgbench/random.hpp"
#include "ecgbench/rpeak.hpp"
#include "ecgbench/synth.hpp"

namespace ecgbench::regimes {

namespace fs = std::filesystem;

RegimeSpec make_spec(const RegimeSettings& settings, RegimeName name, Setting setting, std::uint64_t seed) {
  RegimeSpec spec;
  spec.name = name;
  spec.setting = setting;
  spec.enroll_session = settings.enroll_session;
  spec.probe_session = settings.probe_session;
  spec.enroll_range = settings.enroll_range;
  spec.probe_range = settings.probe_range;
  spec.open_ratio = settings.open_ratio;
  spec.enroll_fraction = settings.single_session_enroll_fraction;
  spec.seed = seed;
  return spec;
}

const SubjectSplit& SplitPlan::split_of(const std::string& subject) const {
  auto it = std::lower_bound(subjects.begin(), subjects.end(), subject,
                             [](const SubjectSplit& s, const std::string& id) { return s.subject_id < id; });
  require(it != subjects.end() && it->subject_id == subject, ErrorCode::InvalidArgument,
          "subject '" + subject + "' is not in the plan");
  return *it;
}

std::string to_string(const CellKey& key) {
  return std::string(ecgbench::to_string(key.first)) + "/" + std::string(ecgbench::to_string(key.second));
}

// ---------------------------------------------------------------------------
// Split planning

namespace {

std::vector<Portion> whole(const std::vector<std::size_t>& records) {
  std::vector<Portion> out;
  for (auto r : records) out.push_back({r, std::nullopt});
  return out;
}

/// Fills `split` for one subject (records in (day, record_index) order) or returns the reason it
/// cannot take part.
std::optional<std::string> assign_subject(const ingest::DatasetIndex& index, const std::vector<std::size_t>& recs,
                                          const RegimeSpec& spec, SubjectSplit& split) {
  const auto day = [&](std::size_t r) { return index.records[r].day_index; };
  const unsigned first_day = day(recs.front());
  const unsigned last_day = day(recs.back());
  std::vector<std::size_t> day0, later;
  for (auto r : recs) (day(r) == first_day ? day0 : later).push_back(r);

  switch (spec.name) {
    case RegimeName::single_session:
      split.enroll = whole({recs[0]});
      split.probe = whole({recs[0]});
      split.beat_split = true;
      return std::nullopt;
    case RegimeName::single_cross_session:
      if (recs.size() < 2) return "needs at least 2 records";
      split.enroll = whole({recs[0]});
      split.probe = whole({recs[1]});
      return std::nullopt;
    case RegimeName::ss_short_term:
      if (day0.size() < 2) return "needs at least 2 records on its first day";
      split.enroll = whole({day0[0]});
      split.probe = whole({day0.begin() + 1, day0.end()});
      return std::nullopt;
    case RegimeName::llo_short_term:
      if (day0.size() < 2) return "needs at least 2 records on its first day";
      split.enroll = whole({day0.begin(), day0.end() - 1});
      split.probe = whole({day0.back()});
      return std::nullopt;
    case RegimeName::ss_long_term:
      if (later.empty()) return "needs records on a later day";
      split.enroll = whole(day0);
      split.probe = whole(later);
      return std::nullopt;
    case RegimeName::llo_long_term: {
      if (last_day == first_day) return "needs records on at least 2 days";
      std::vector<std::size_t> past, last;
      for (auto r : recs) (day(r) == last_day ? last : past).push_back(r);
      split.enroll = whole(past);
      split.probe = whole(last);
      return std::nullopt;
    }
    case RegimeName::cross_session: {
      std::string enroll_id, probe_id;
      if (spec.enroll_session) {
        enroll_id = *spec.enroll_session;
        probe_id = *spec.probe_session;
      } else {
        std::vector<std::string> order;
        for (auto r : recs) {
          const auto& s = index.records[r].session_id;
          if (std::find(order.begin(), order.end(), s) == order.end()) order.push_back(s);
        }
        if (order.size() < 2) return "needs at least 2 sessions";
        enroll_id = order[0];
        probe_id = order[1];
      }
      std::vector<std::size_t> e, p;
      for (auto r : recs) {
        if (index.records[r].session_id == enroll_id) e.push_back(r);
        if (index.records[r].session_id == probe_id) p.push_back(r);
      }
      if (e.empty() || p.empty()) return "lacks session '" + (e.empty() ? enroll_id : probe_id) + "'";
      split.enroll = whole(e);
      split.probe = whole(p);
      return std::nullopt;
    }
    case RegimeName::custom_split:
      require(spec.enroll_range && spec.probe_range, ErrorCode::InconsistentSettings,
              "custom_split needs enroll and probe ranges");
      split.enroll = {{recs[0], spec.enroll_range}};
      split.probe = {{recs[0], spec.probe_range}};
      return std::nullopt;
  }
  return "unknown regime";
}

}  // namespace

std::pair<std::vector<std::string>, std::vector<std::string>> subject_partition(std::vector<std::string> subjects,
                                                                                 double ratio, std::uint64_t seed) {
  require(ratio > 0.0 && ratio < 1.0, ErrorCode::InvalidArgument, "partition ratio must be in (0, 1)");
  std::sort(subjects.begin(), subjects.end());
  subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
  require(subjects.size() >= 2, ErrorCode::TooFewSubjects,
          "a subject-disjoint split needs at least 2 subjects, got " + std::to_string(subjects.size()));
  Rng rng(derive_seed(seed, "subject-partition"));
  for (std::size_t i = subjects.size() - 1; i > 0; --i) {
    const auto j = std::uniform_int_distribution<std::size_t>(0, i)(rng);
    std::swap(subjects[i], subjects[j]);
  }
  const auto n = static_cast<double>(subjects.size());
  const auto cut = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(ratio * n)), 1, subjects.size() - 1);
  std::vector<std::string> train(subjects.begin(), subjects.begin() + static_cast<std::ptrdiff_t>(cut));
  std::vector<std::string> eval(subjects.begin() + static_cast<std::ptrdiff_t>(cut), subjects.end());
  std::sort(train.begin(), train.end());
  std::sort(eval.begin(), eval.end());
  return {train, eval};
}

std::vector<std::size_t> split_beats(std::size_t n, double fraction, std::uint64_t seed) {
  require(fraction > 0.0 && fraction < 1.0, ErrorCode::InvalidArgument, "split fraction must be in (0, 1)");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, "beat-split"));
  for (std::size_t i = n; i > 1; --i) {
    const auto j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    std::swap(order[i - 1], order[j]);
  }
  const auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  std::vector<std::size_t> enroll(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
  std::sort(enroll.begin(), enroll.end());
  return enroll;
}

SplitPlan map_regime(const ingest::DatasetIndex& index, const RegimeSpec& spec) {
  SplitPlan plan;
  plan.spec = spec;
  std::map<std::string, std::vector<std::size_t>> by_subject;
  for (std::size_t i = 0; i < index.records.size(); ++i) by_subject[index.records[i].subject_id].push_back(i);
  plan.subjects_total = by_subject.size();

  for (const auto& [subject, recs] : by_subject) {
    SubjectSplit split;
    split.subject_id = subject;
    if (auto reason = assign_subject(index, recs, spec, split)) {
      plan.excluded.push_back({subject, *reason});
    } else {
      plan.subjects.push_back(std::move(split));
    }
  }
  require(!plan.subjects.empty(), ErrorCode::RegimeUnsatisfiable,
          std::string(to_string(spec.name)) + ": none of " + std::to_string(plan.subjects_total) +
              " subjects qualifies" + (plan.excluded.empty() ? "" : " (e.g. " + plan.excluded.front().subject_id + " " +
                                                                     plan.excluded.front().reason + ")"));

  std::vector<std::string> ids;
  for (const auto& s : plan.subjects) ids.push_back(s.subject_id);
  if (spec.setting == Setting::open) {
    auto [train, eval] = subject_partition(ids, spec.open_ratio, derive_seed(spec.seed, "partition"));
    plan.training_subjects = std::move(train);
    plan.evaluation_subjects = std::move(eval);
  } else {
    plan.training_subjects = ids;
    plan.evaluation_subjects = ids;
  }
  return plan;
}

namespace {

std::pair<std::size_t, std::size_t> range_samples(const TimeRange& r, double fs, std::size_t length) {
  require(r.begin_s >= 0.0 && r.begin_s < r.end_s, ErrorCode::RangeOutOfBounds, "empty or negative time range");
  const auto b = std::llround(r.begin_s * fs);
  const auto e = std::llround(r.end_s * fs);
  require(e <= static_cast<long long>(length), ErrorCode::RangeOutOfBounds,
          "range [" + std::to_string(r.begin_s) + ", " + std::to_string(r.end_s) + ") s exceeds the " +
              std::to_string(static_cast<double>(length) / fs) + " s record");
  return {static_cast<std::size_t>(b), static_cast<std::size_t>(e)};
}

Recording slice(const Recording& rec, std::size_t b, std::size_t e) {
  Recording out;
  out.provenance = rec.provenance;
  out.fs = rec.fs;
  for (const auto& ch : rec.channels) {
    out.channels.emplace_back(ch.begin() + static_cast<std::ptrdiff_t>(b), ch.begin() + static_cast<std::ptrdiff_t>(e));
  }
  return out;
}

}  // namespace

std::pair<Recording, Recording> temporal_windows(const Recording& rec, TimeRange enroll, TimeRange probe) {
  validate_recording(rec);
  require(enroll.end_s <= probe.begin_s || probe.end_s <= enroll.begin_s, ErrorCode::OverlappingRanges,
          "enrollment and probe ranges overlap");
  const auto [eb, ee] = range_samples(enroll, rec.fs, rec.length());
  const auto [pb, pe] = range_samples(probe, rec.fs, rec.length());
  return {slice(rec, eb, ee), slice(rec, pb, pe)};
}

// ---------------------------------------------------------------------------
// Dataset preparation

namespace {

PreparedRecord prepare_record(const Recording& rec, const RunConfig& cfg) {
  const dsp::CleanSignal clean = dsp::preprocess(rec, cfg.preprocess);
  PreparedRecord out;
  out.provenance = rec.provenance;
  out.fs = rec.fs;
  out.length = clean.samples.size();
  const auto& seg = cfg.segmentation;
  if (seg.mode == SegmentMode::beat) {
    const auto peaks = rpeak::pan_tompkins(clean.samples, rec.fs);
    out.segments = segment::segment_beats(clean.samples, rec.fs, peaks.indices, seg.pre_s, seg.post_s, seg.align_peak,
                                          rec.provenance);
  } else {
    for (const auto& w : segment::segment_blind(clean.samples, rec.fs, seg.window_s, seg.stride_s, rec.provenance)) {
      out.segments.push_back(segment::as_beat(w));
    }
  }
  require(!out.segments.empty(), ErrorCode::NoPeaksDetected,
          "no usable segments in record of subject '" + rec.provenance.subject_id + "'");
  for (const auto& s : out.segments) {
    out.inputs.push_back(embed::prepare_beat(s.samples, cfg.preprocess.beat_length, cfg.preprocess.normalization));
  }
  return out;
}

void check_aligned(const ingest::DatasetIndex& index, const std::vector<Recording>& recordings) {
  require(index.records.size() == recordings.size(), ErrorCode::InvalidArgument,
          "index and recordings differ in length");
}

}  // namespace

PreparedDataset prepare_dataset_serial(const ingest::DatasetIndex& index, const std::vector<Recording>& recordings,
                                       const RunConfig& cfg) {
  check_aligned(index, recordings);
  PreparedDataset out{index, {}};
  for (const auto& rec : recordings) out.records.push_back(prepare_record(rec, cfg));
  return out;
}

PreparedDataset prepare_dataset(const ingest::DatasetIndex& index, const std::vector<Recording>& recordings,
                                const RunConfig& cfg) {
  check_aligned(index, recordings);
  PreparedDataset out{index, std::vector<PreparedRecord>(recordings.size())};
  const auto n = static_cast<std::ptrdiff_t>(recordings.size());
  bool failed = false;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out.records[static_cast<std::size_t>(i)] = prepare_record(recordings[static_cast<std::size_t>(i)], cfg);
    } catch (...) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) return prepare_dataset_serial(index, recordings, cfg);
  return out;
}

std::pair<ingest::DatasetIndex, std::vector<Recording>> load_source(const DatasetSource& source,
                                                                   const fs::path& base_dir) {
  if (source.manifest) {
    fs::path path(*source.manifest);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    auto index = ingest::load_manifest(path);
    auto recordings = ingest::load_dataset(index);
    return {std::move(index), std::move(recordings)};
  }
  require(source.synthetic.has_value(), ErrorCode::InvalidArgument, "dataset source is empty");
  const auto& j = *source.synthetic;
  for (const auto& [key, value] : j.items()) {
    require(key == "preset" || key == "spec" || key == "seed", ErrorCode::UnknownField,
            "unknown field 'dataset.synthetic." + key + "'");
  }
  require(j.contains("preset") != j.contains("spec"), ErrorCode::SchemaError,
          "dataset.synthetic needs exactly one of 'preset' or 'spec'");
  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    require(is_non_negative_integer(j["seed"]), ErrorCode::SchemaError, "dataset.synthetic.seed must be a non-negative integer");
    seed = j["seed"].get<std::uint64_t>();
  }
  synth::DatasetSpec spec;
  if (j.contains("preset")) {
    require(j["preset"].is_string(), ErrorCode::SchemaError, "dataset.synthetic.preset must be a string");
    const auto name = j["preset"].get<std::string>();
    const auto names = synth::preset_names();
    require(std::find(names.begin(), names.end(), name) != names.end(), ErrorCode::SchemaError,
            "unknown synthetic preset '" + name + "'");
    spec = synth::preset(name);
  } else {
    spec = synth::spec_from_json(j["spec"]);
  }
  auto data = synth::synthesize_dataset(spec, seed);
  std::vector<Recording> recordings;
  for (auto& r : data.records) recordings.push_back(std::move(r.recording));
  return {std::move(data.index), std::move(recordings)};
}

// ---------------------------------------------------------------------------
// Materialisation and leakage

std::vector<Assignment> materialize(const SplitPlan& plan, const PreparedDataset& data) {
  std::vector<Assignment> out;
  for (const auto& split : plan.subjects) {
    Assignment a;
    a.subject_id = split.subject_id;
    if (split.beat_split) {
      const std::size_t r = split.enroll.front().record;
      const std::size_t n = data.records[r].segments.size();
      const auto enroll = split_beats(n, plan.spec.enroll_fraction, derive_seed(plan.spec.seed, "split", split.subject_id));
      std::vector<bool> is_enroll(n, false);
      for (auto i : enroll) is_enroll[i] = true;
      a.probe_groups.emplace_back();
      for (std::size_t i = 0; i < n; ++i) (is_enroll[i] ? a.enroll : a.probe_groups.back()).push_back({r, i});
      out.push_back(std::move(a));
      continue;
    }
    auto collect = [&](const Portion& p) {
      const auto& rec = data.records[p.record];
      std::size_t b = 0, e = rec.length;
      if (p.range) std::tie(b, e) = range_samples(*p.range, rec.fs, rec.length);
      std::vector<SegmentRef> refs;
      for (std::size_t i = 0; i < rec.segments.size(); ++i) {
        if (rec.segments[i].start >= b && rec.segments[i].end() <= e) refs.push_back({p.record, i});
      }
      return refs;
    };
    for (const auto& p : split.enroll) {
      const auto refs = collect(p);
      a.enroll.insert(a.enroll.end(), refs.begin(), refs.end());
    }
    for (const auto& p : split.probe) a.probe_groups.push_back(collect(p));
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<std::string> find_leakage(const SplitPlan& plan, const std::vector<Assignment>& assignments,
                                      const PreparedDataset& data) {
  std::vector<std::string> issues;
  for (const auto& a : assignments) {
    const bool beat_split = plan.split_of(a.subject_id).beat_split;
    for (const auto& group : a.probe_groups) {
      for (const auto& p : group) {
        const auto& ps = data.records[p.record].segments[p.segment];
        for (const auto& e : a.enroll) {
          if (e.record != p.record) continue;
          const auto& es = data.records[e.record].segments[e.segment];
          const bool clash = beat_split ? es.peak == ps.peak : (es.start < ps.end() && ps.start < es.end());
          if (clash) {
            issues.push_back(a.subject_id + ": record " + std::to_string(p.record) + " samples [" +
                             std::to_string(ps.start) + ", " + std::to_string(ps.end()) + ") on both sides");
          }
        }
      }
    }
  }
  if (plan.spec.setting == Setting::open) {
    for (const auto& t : plan.training_subjects) {
      if (std::binary_search(plan.evaluation_subjects.begin(), plan.evaluation_subjects.end(), t)) {
        issues.push_back(t + ": embedder-training subject also evaluated");
      }
    }
  }
  return issues;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

std::unique_ptr<embed::Embedder> fit_embedder(const PreparedDataset& data, const RunConfig& cfg, const SplitPlan& plan,
                                              const std::vector<Assignment>& assignments, std::uint64_t seed) {
  if (cfg.embedder.kind == EmbedderKind::morphology) return std::make_unique<embed::MorphologyEmbedder>();

  embed::LabeledSet train;
  for (std::size_t label = 0; label < plan.training_subjects.size(); ++label) {
    const auto& subject = plan.training_subjects[label];
    const auto it = std::find_if(assignments.begin(), assignments.end(),
                                 [&](const Assignment& a) { return a.subject_id == subject; });
    if (cfg.embedder.augment.multiplier == 0) {
      for (const auto& ref : it->enroll) train.add(data.records[ref.record].inputs[ref.segment], label);
      continue;
    }
    std::vector<segment::BeatSegment> originals;
    for (const auto& ref : it->enroll) originals.push_back(data.records[ref.record].segments[ref.segment]);
    const auto augmented = augment::augment_training_set(originals, cfg.embedder.augment, derive_seed(seed, "augment"));
    for (const auto& s : augmented) {
      train.add(embed::prepare_beat(s.samples, cfg.preprocess.beat_length, cfg.preprocess.normalization), label);
    }
  }
  embed::MlpHyperparams hp;
  hp.hidden_dim = cfg.embedder.mlp.hidden_dim;
  hp.lr = cfg.embedder.mlp.lr;
  hp.epochs = cfg.embedder.mlp.epochs;
  hp.batch = cfg.embedder.mlp.batch;
  hp.seed = derive_seed(seed, "mlp");
  return std::make_unique<embed::MlpEmbedder>(embed::mlp_train(train, hp).model);
}

std::vector<biometric::Vector> embed_refs(const embed::Embedder& embedder, const PreparedDataset& data,
                                          const std::vector<SegmentRef>& refs) {
  std::vector<biometric::Vector> out;
  out.reserve(refs.size());
  for (const auto& r : refs) out.push_back(embedder.embed(data.records[r.record].inputs[r.segment]).values);
  return out;
}

}  // namespace

SeedMetrics evaluate_cell(const PreparedDataset& data, const RunConfig& cfg, RegimeName regime, Setting setting,
                          std::uint64_t seed) {
  const RegimeSpec spec = make_spec(cfg.regime, regime, setting, seed);
  const SplitPlan plan = map_regime(data.index, spec);
  const auto assignments = materialize(plan, data);
  const auto leaks = find_leakage(plan, assignments, data);
  require(leaks.empty(), ErrorCode::LeakageDetected, leaks.empty() ? "" : leaks.front());

  const auto embedder = fit_embedder(data, cfg, plan, assignments, seed);
  const auto& ev = cfg.evaluation;
  std::vector<biometric::Template> gallery;
  std::vector<biometric::Probe> probes;
  for (const auto& subject : plan.evaluation_subjects) {
    const auto it = std::find_if(assignments.begin(), assignments.end(),
                                 [&](const Assignment& a) { return a.subject_id == subject; });
    require(!it->enroll.empty(), ErrorCode::EmptyEnrollment, "no enrollment segments for '" + subject + "'");
    gallery.push_back(biometric::build_template(embed_refs(*embedder, data, it->enroll), ev.template_fusion,
                                                ev.template_size, ev.metric, subject));
    for (const auto& group : it->probe_groups) {
      if (group.empty()) continue;
      for (auto& v : biometric::fuse_probes(embed_refs(*embedder, data, group), ev.probe_fusion_k)) {
        probes.push_back({std::move(v), subject});
      }
    }
  }
  require(!probes.empty(), ErrorCode::RegimeUnsatisfiable, "no probe segments survived segmentation");

  const auto matrix = biometric::score_matrix(gallery, probes, ev.metric);
  const auto pairs = biometric::generate_pairs(matrix, ev.pair_sampling, derive_seed(seed, "pairs"));
  SeedMetrics m;
  m.rank1 = metrics::rank_accuracy(matrix, 1);
  m.rank5 = metrics::rank_accuracy(matrix, 5);
  m.eer = metrics::eer(pairs);
  m.auc = metrics::auc(pairs);
  m.dprime = metrics::dprime(pairs);
  const auto tar = metrics::tar_at_far(pairs, ev.far_target);
  m.tar = tar.tar;
  m.tar_coarse = tar.coarse;
  m.probes = probes.size();
  m.genuine_pairs = pairs.genuine.size();
  m.impostor_pairs = pairs.impostor.size();
  m.subjects_total = plan.subjects_total;
  m.subjects_used = plan.subjects.size();
  m.subjects_excluded = plan.excluded.size();
  m.training_subjects = plan.training_subjects.size();
  m.evaluation_subjects = plan.evaluation_subjects.size();
  return m;
}

std::map<CellKey, SeedMetrics> run_evaluation(const PreparedDataset& data, const RunConfig& cfg, std::uint64_t seed) {
  std::map<CellKey, SeedMetrics> out;
  for (auto regime : cfg.regime.names) {
    for (auto setting : cfg.regime.settings) out[{regime, setting}] = evaluate_cell(data, cfg, regime, setting, seed);
  }
  return out;
}

std::map<CellKey, SeedMetrics> run_evaluation(const RunConfig& cfg, std::uint64_t seed, const fs::path& base_dir) {
  const auto [index, recordings] = load_source(cfg.dataset, base_dir);
  return run_evaluation(prepare_dataset(index, recordings, cfg), cfg, seed);
}

// ---------------------------------------------------------------------------
// Aggregation

Stat mean_std(const std::vector<double>& values) {
  require(!values.empty(), ErrorCode::InvalidArgument, "no values to aggregate");
  const double n = static_cast<double>(values.size());
  Stat s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

MetricsReport aggregate_runs(const std::vector<SeedRecord>& records) {
  require(!records.empty(), ErrorCode::InvalidArgument, "no seed records to aggregate");
  MetricsReport report;
  report.per_seed = records;
  std::set<CellKey> keys;
  for (const auto& [k, v] : records.front().cells) keys.insert(k);
  for (const auto& r : records) {
    report.seeds.push_back(r.seed);
    std::set<CellKey> mine;
    for (const auto& [k, v] : r.cells) mine.insert(k);
    require(mine == keys, ErrorCode::KeyMismatch, "seed " + std::to_string(r.seed) + " reports a different cell set");
  }
  for (const auto& key : keys) {
    auto collect = [&](auto field) {
      std::vector<double> v;
      for (const auto& r : records) v.push_back(r.cells.at(key).*field);
      return mean_std(v);
    };
    CellSummary c;
    c.rank1 = collect(&SeedMetrics::rank1);
    c.rank5 = collect(&SeedMetrics::rank5);
    c.eer = collect(&SeedMetrics::eer);
    c.auc = collect(&SeedMetrics::auc);
    c.dprime = collect(&SeedMetrics::dprime);
    c.tar = collect(&SeedMetrics::tar);
    const auto& first = records.front().cells.at(key);
    c.subjects_total = first.subjects_total;
    c.subjects_used = first.subjects_used;
    c.subjects_excluded = first.subjects_excluded;
    report.cells[key] = c;

    bool coarse = false;
    for (const auto& r : records) coarse = coarse || r.cells.at(key).tar_coarse;
    if (coarse) {
      report.warnings.push_back(to_string(key) + ": fewer impostor pairs than 1/far_target, TAR@FAR is coarse");
    }
    if (c.subjects_excluded > 0) {
      report.warnings.push_back(to_string(key) + ": " + std::to_string(c.subjects_excluded) + " of " +
                                std::to_string(c.subjects_total) + " subjects excluded");
    }
  }
  return report;
}

MetricsReport run_all(const PreparedDataset& data, const RunConfig& cfg) {
  std::vector<CellKey> cells;
  for (auto regime : cfg.regime.names) {
    for (auto setting : cfg.regime.settings) cells.emplace_back(regime, setting);
  }
  const std::size_t units = cfg.seeds.size() * cells.size();
  std::vector<SeedMetrics> results(units);
  std::vector<std::exception_ptr> errors(units);
  const auto n = static_cast<std::ptrdiff_t>(units);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t u = 0; u < n; ++u) {
    const auto i = static_cast<std::size_t>(u);
    try {
      const auto& [regime, setting] = cells[i % cells.size()];
      results[i] = evaluate_cell(data, cfg, regime, setting, cfg.seeds[i / cells.size()]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<SeedRecord> records;
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    SeedRecord r;
    r.seed = cfg.seeds[s];
    for (std::size_t c = 0; c < cells.size(); ++c) r.cells[cells[c]] = results[s * cells.size() + c];
    records.push_back(std::move(r));
  }
  MetricsReport report = aggregate_runs(records);
  report.config_digest = config_digest(cfg);
  return report;
}

}  // namespace ecgbench::regimes
