// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP kernels. Arg = thread count for the parallel variants.

#include <benchmark/benchmark.h>

#include <random>

#include "ecgbench/augment.hpp"
#include "ecgbench/biometric.hpp"
#include "ecgbench/embed.hpp"
#include "ecgbench/parallel.hpp"
#include "ecgbench/regimes.hpp"
#include "ecgbench/synth.hpp"

using namespace ecgbench;

namespace {

synth::DatasetSpec bench_spec() {
  auto s = synth::preset("fallacy30");
  s.n_subjects = 8;
  s.duration_s = 30;
  return s;
}

struct Fixture {
  ingest::DatasetIndex index;
  std::vector<Recording> recordings;
  RunConfig cfg;
  regimes::PreparedDataset data;
  std::vector<std::vector<double>> inputs;
  std::vector<segment::BeatSegment> segments;
  embed::MlpEmbedder embedder{embed::mlp_init(128, 64, 8, 1)};
  std::vector<biometric::Template> gallery;
  std::vector<biometric::Probe> probes;

  Fixture() {
    const auto syn = synth::synthesize_dataset(bench_spec(), 1);
    index = syn.index;
    for (const auto& r : syn.records) recordings.push_back(r.recording);
    cfg = validate_config(Json::parse(R"({"dataset": {"manifest": "unused.json"}})"));
    data = regimes::prepare_dataset(index, recordings, cfg);
    for (const auto& r : data.records) {
      inputs.insert(inputs.end(), r.inputs.begin(), r.inputs.end());
      segments.insert(segments.end(), r.segments.begin(), r.segments.end());
    }
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    for (std::size_t i = 0; i < 200; ++i) {
      biometric::Vector v(64);
      for (auto& x : v) x = d(rng);
      gallery.push_back(biometric::build_template({v}, Fusion::mean, std::nullopt, Metric::cosine, "G" + std::to_string(i)));
    }
    for (std::size_t i = 0; i < 2000; ++i) {
      biometric::Vector v(64);
      for (auto& x : v) x = d(rng);
      probes.push_back({v, "G" + std::to_string(i % 200)});
    }
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

augment::AugmentSpec aug_spec() {
  augment::AugmentSpec s;
  s.multiplier = 4;
  s.ops = {augment::AugmentOp{}, augment::AugmentOp{augment::OpKind::gaussian_noise},
           augment::AugmentOp{augment::OpKind::time_shift}};
  return s;
}

void BM_synthesize_serial(benchmark::State& state) {
  const auto spec = bench_spec();
  for (auto _ : state) benchmark::DoNotOptimize(synth::synthesize_dataset_serial(spec, 1));
}
void BM_synthesize_parallel(benchmark::State& state) {
  parallel::ScopedThreads t(static_cast<int>(state.range(0)));
  const auto spec = bench_spec();
  for (auto _ : state) benchmark::DoNotOptimize(synth::synthesize_dataset(spec, 1));
}

void BM_prepare_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(regimes::prepare_dataset_serial(f.index, f.recordings, f.cfg));
}
void BM_prepare_parallel(benchmark::State& state) {
  parallel::ScopedThreads t(static_cast<int>(state.range(0)));
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(regimes::prepare_dataset(f.index, f.recordings, f.cfg));
}

void BM_augment_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(augment::augment_training_set_serial(f.segments, aug_spec(), 2));
}
void BM_augment_parallel(benchmark::State& state) {
  parallel::ScopedThreads t(static_cast<int>(state.range(0)));
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(augment::augment_training_set(f.segments, aug_spec(), 2));
}

void BM_embed_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(embed::embed_batch_serial(f.embedder, f.inputs));
}
void BM_embed_parallel(benchmark::State& state) {
  parallel::ScopedThreads t(static_cast<int>(state.range(0)));
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(embed::embed_batch(f.embedder, f.inputs));
}

void BM_score_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(biometric::score_matrix_serial(f.gallery, f.probes, Metric::cosine));
}
void BM_score_parallel(benchmark::State& state) {
  parallel::ScopedThreads t(static_cast<int>(state.range(0)));
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(biometric::score_matrix(f.gallery, f.probes, Metric::cosine));
}

}  // namespace

BENCHMARK(BM_synthesize_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesize_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_prepare_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_prepare_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_augment_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_augment_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_embed_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_embed_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_score_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_score_parallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
