// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ecgbench/config.hpp"
#include "ecgbench/error.hpp"
#include "ecgbench/types.hpp"

using namespace ecgbench;

namespace {

Json minimal() { return Json::parse(R"({"dataset": {"manifest": "m.json"}, "regime": "single-session"})"); }

ErrorCode code_of(const Json& raw) {
  try {
    validate_config(raw);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected validate_config to throw");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("minimal config gets the baseline pipeline defaults") {
  const RunConfig cfg = validate_config(minimal());
  CHECK(cfg.segmentation.mode == SegmentMode::beat);
  CHECK(cfg.segmentation.pre_s == 0.2);
  CHECK(cfg.segmentation.post_s == 0.4);
  CHECK(cfg.evaluation.probe_fusion_k == 3);
  CHECK(cfg.evaluation.metric == Metric::cosine);
  CHECK(!cfg.evaluation.template_size.has_value());
  CHECK(cfg.evaluation.template_fusion == Fusion::mean);
  CHECK(cfg.evaluation.pair_sampling == PairSampling::balanced);
  CHECK(cfg.evaluation.far_target == 0.001);
  CHECK(cfg.seeds.size() == 5);
  REQUIRE(cfg.preprocess.filters.size() == 1);
  const auto& f = cfg.preprocess.filters[0];
  CHECK(f.kind == dsp::FilterKind::butterworth_bandpass);
  CHECK(f.order == 3);
  CHECK(f.low_hz == 0.5);
  CHECK(f.high_hz == 40.0);
  CHECK(cfg.preprocess.normalization == dsp::Normalization::zscore);
  REQUIRE(cfg.regime.names.size() == 1);
  CHECK(cfg.regime.names[0] == RegimeName::single_session);
}

TEST_CASE("blind mode with zero stride is inconsistent") {
  Json raw = minimal();
  raw["segmentation"] = {{"mode", "blind"}, {"window_s", 5.0}, {"stride_s", 0.0}};
  CHECK(code_of(raw) == ErrorCode::InconsistentSettings);
  raw["segmentation"] = {{"mode", "blind"}, {"window_s", 5.0}, {"stride_s", 6.0}};
  CHECK(code_of(raw) == ErrorCode::InconsistentSettings);
}

TEST_CASE("mode-specific fields are rejected in the other mode") {
  Json raw = minimal();
  raw["segmentation"] = {{"mode", "blind"}, {"pre_s", 0.2}};
  CHECK(code_of(raw) == ErrorCode::InconsistentSettings);
  raw["segmentation"] = {{"mode", "beat"}, {"window_s", 5.0}};
  CHECK(code_of(raw) == ErrorCode::InconsistentSettings);
  raw["segmentation"] = {{"mode", "beat"}, {"pre_s", 0.0}, {"post_s", 0.0}};
  CHECK(code_of(raw) == ErrorCode::InconsistentSettings);
}

TEST_CASE("seeds round-trip unchanged") {
  Json raw = minimal();
  raw["seeds"] = {1, 2, 3, 4, 5};
  const RunConfig cfg = validate_config(raw);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(to_json(cfg)["seeds"] == raw["seeds"]);
}

TEST_CASE("empty seeds and unknown keys fail closed") {
  Json raw = minimal();
  raw["seeds"] = Json::array();
  CHECK(code_of(raw) == ErrorCode::EmptySeeds);
  raw = minimal();
  raw["colour"] = "blue";
  CHECK(code_of(raw) == ErrorCode::UnknownField);
  raw = minimal();
  raw["evaluation"] = {{"metrc", "cosine"}};
  CHECK(code_of(raw) == ErrorCode::UnknownField);
  raw = minimal();
  raw["evaluation"] = {{"probe_fusion_k", 0}};
  CHECK(code_of(raw) == ErrorCode::InconsistentSettings);
  raw = minimal();
  raw["evaluation"] = {{"metric", 3}};
  CHECK(code_of(raw) == ErrorCode::SchemaError);
  CHECK(code_of(Json::parse(R"({"regime": "single_session"})")) == ErrorCode::SchemaError);
}

TEST_CASE("validation is idempotent and the digest is stable") {
  Json raw = minimal();
  raw["evaluation"] = {{"template_size", 10}, {"metric", "pearson"}};
  raw["regime"] = {{"names", {"cross-session"}}, {"enroll_session", "a"}, {"probe_session", "b"}};
  const RunConfig once = validate_config(raw);
  const RunConfig twice = validate_config(to_json(once));
  CHECK(once == twice);
  CHECK(to_json(once) == to_json(twice));
  CHECK(config_digest(once) == config_digest(twice));
  CHECK(config_digest(once).size() == 16);

  // key order in the source file does not matter
  const RunConfig reordered = validate_config(Json::parse(
      R"({"regime": {"probe_session": "b", "enroll_session": "a", "names": ["cross_session"]},
          "evaluation": {"metric": "pearson", "template_size": 10}, "dataset": {"manifest": "m.json"}})"));
  CHECK(config_digest(reordered) == config_digest(once));

  Json other = raw;
  other["evaluation"]["template_size"] = 11;
  CHECK(config_digest(validate_config(other)) != config_digest(once));
}

TEST_CASE("regime parameters") {
  Json raw = minimal();
  raw["regime"] = {{"names", {"custom_split"}}};
  CHECK(code_of(raw) == ErrorCode::InconsistentSettings);
  raw["regime"] = {{"names", {"custom_split"}}, {"enroll_range", {0, 300}}, {"probe_range", {200, 500}}};
  CHECK(code_of(raw) == ErrorCode::OverlappingRanges);
  raw["regime"] = {{"names", {"custom_split"}}, {"enroll_range", {0, 300}}, {"probe_range", {600, 900}}};
  const auto cfg = validate_config(raw);
  REQUIRE(cfg.regime.enroll_range.has_value());
  CHECK(cfg.regime.probe_range->begin_s == 600.0);
  raw["regime"] = {{"names", {"single_session"}}, {"open_ratio", 1.0}};
  CHECK(code_of(raw) == ErrorCode::InconsistentSettings);
  raw["regime"] = "leave-last-out-long-term";
  CHECK(code_of(raw) == ErrorCode::SchemaError);
  raw["regime"] = "llo-long-term";
  CHECK(validate_config(raw).regime.names[0] == RegimeName::llo_long_term);
}

TEST_CASE("enum spellings") {
  CHECK(parse_regime("single-cross-session") == RegimeName::single_cross_session);
  CHECK(parse_regime("ss_short_term") == RegimeName::ss_short_term);
  CHECK(!parse_regime("random").has_value());
  for (auto r : {RegimeName::single_session, RegimeName::single_cross_session, RegimeName::ss_short_term,
                 RegimeName::llo_short_term, RegimeName::ss_long_term, RegimeName::llo_long_term,
                 RegimeName::cross_session, RegimeName::custom_split}) {
    CHECK(parse_regime(to_string(r)) == r);
  }
  CHECK(parse_metric("euclidean") == Metric::euclidean);
  CHECK(parse_setting("open") == Setting::open);
  CHECK(to_string(ErrorCode::LeakageDetected) == "LeakageDetected");
}

TEST_CASE("recording validation") {
  Recording rec;
  rec.fs = 360;
  rec.channels = {{1, 2, 3}, {4, 5, 6}};
  CHECK_NOTHROW(validate_recording(rec));
  CHECK(rec.duration_s() == doctest::Approx(3.0 / 360.0));
  rec.channels[1].pop_back();
  CHECK_THROWS_AS(validate_recording(rec), Error);
  rec.channels = {{1.0}};
  rec.fs = 0;
  CHECK_THROWS_AS(validate_recording(rec), Error);
}

}
