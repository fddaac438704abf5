// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ecgbench/augment.hpp"
#include "ecgbench/biometric.hpp"
#include "ecgbench/embed.hpp"
#include "ecgbench/parallel.hpp"
#include "ecgbench/regimes.hpp"
#include "ecgbench/synth.hpp"
#include "oracles.hpp"

using namespace ecgbench;

namespace {

synth::DatasetSpec small_spec() {
  auto s = synth::preset("ablation");
  s.n_subjects = 4;
  s.duration_s = 15;
  return s;
}

}  // namespace

TEST_SUITE("parallel") {

TEST_CASE("scoped thread count") {
  const int before = parallel::max_threads();
  {
    parallel::ScopedThreads t(3);
    CHECK(parallel::max_threads() == 3);
  }
  CHECK(parallel::max_threads() == before);
  CHECK(!parallel::in_parallel());
}

TEST_CASE("synthesis and loading match the serial references") {
  const auto spec = small_spec();
  for (int threads : {1, 4}) {
    parallel::ScopedThreads t(threads);
    const auto a = synth::synthesize_dataset(spec, 7);
    const auto b = synth::synthesize_dataset_serial(spec, 7);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].recording.channels == b.records[i].recording.channels);
      CHECK(a.records[i].true_peaks == b.records[i].true_peaks);
    }
  }
  oracle::TempDir dir("parallel-load");
  const auto index = synth::generate_dataset(spec, 7, dir.path());
  parallel::ScopedThreads t(4);
  const auto p = ingest::load_dataset(index);
  const auto s = ingest::load_dataset_serial(index);
  REQUIRE(p.size() == s.size());
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i].channels == s[i].channels);
}

TEST_CASE("dataset preparation, augmentation, embedding and scoring") {
  parallel::ScopedThreads t(4);
  const auto syn = synth::synthesize_dataset(small_spec(), 2);
  std::vector<Recording> recs;
  for (const auto& r : syn.records) recs.push_back(r.recording);
  const RunConfig cfg = validate_config(Json::parse(R"({"dataset": {"manifest": "m.json"}})"));
  const auto p = regimes::prepare_dataset(syn.index, recs, cfg);
  const auto s = regimes::prepare_dataset_serial(syn.index, recs, cfg);
  for (std::size_t i = 0; i < p.records.size(); ++i) CHECK(p.records[i].inputs == s.records[i].inputs);

  augment::AugmentSpec aug;
  aug.multiplier = 2;
  aug.ops = {augment::AugmentOp{}, augment::AugmentOp{augment::OpKind::gaussian_noise}};
  const auto& segs = p.records[0].segments;
  const auto ap = augment::augment_training_set(segs, aug, 9);
  const auto as = augment::augment_training_set_serial(segs, aug, 9);
  REQUIRE(ap.size() == as.size());
  CHECK(ap.size() == segs.size() * 3);
  for (std::size_t i = 0; i < ap.size(); ++i) CHECK(ap[i].samples == as[i].samples);

  const embed::MlpEmbedder e(embed::mlp_init(p.records[0].inputs[0].size(), 16, 4, 1));
  std::vector<std::vector<double>> inputs;
  for (const auto& r : p.records) inputs.insert(inputs.end(), r.inputs.begin(), r.inputs.end());
  const auto ep = embed::embed_batch(e, inputs);
  const auto es = embed::embed_batch_serial(e, inputs);
  for (std::size_t i = 0; i < ep.size(); ++i) CHECK(ep[i].values == es[i].values);

  std::vector<biometric::Template> gallery;
  std::vector<biometric::Probe> probes;
  for (std::size_t i = 0; i < 40; ++i) {
    const std::string id = "S" + std::to_string(i % 8);
    if (i < 8) gallery.push_back(biometric::build_template({ep[i].values}, Fusion::mean, std::nullopt, Metric::cosine, id));
    else probes.push_back({ep[i].values, id});
  }
  for (auto m : {Metric::cosine, Metric::euclidean, Metric::pearson}) {
    CHECK(biometric::score_matrix(gallery, probes, m).scores == biometric::score_matrix_serial(gallery, probes, m).scores);
  }
}

}
