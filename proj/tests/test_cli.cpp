// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "ecgbench/cli.hpp"
#include "ecgbench/ingest.hpp"
#include "ecgbench/synth.hpp"
#include "oracles.hpp"

using namespace ecgbench;
using namespace ecgbench::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json small_config() {
  auto spec = synth::preset("fallacy30");
  spec.n_subjects = 4;
  spec.duration_s = 30;
  Json cfg;
  cfg["dataset"] = {{"synthetic", {{"spec", synth::to_json(spec)}, {"seed", 3}}}};
  cfg["embedder"] = {{"kind", "morphology"}};
  cfg["regime"] = {{"names", {"single_session", "cross_session"}}, {"settings", {"closed"}}};
  cfg["seeds"] = {0, 1};
  return cfg;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == kUsageError);
  CHECK(run({"frobnicate"}).code == kUsageError);
  CHECK(run({"run", "--config"}).code == kUsageError);
  CHECK(run({"validate", "--config", "/nonexistent/cfg.json"}).code == kUsageError);
}

TEST_CASE("validate") {
  oracle::TempDir dir("cli-validate");
  ingest::write_text(dir / "ok.json", small_config().dump());
  const auto ok = run({"validate", "--config", (dir / "ok.json").string()});
  CHECK(ok.code == kOk);
  CHECK(ok.out.find("config ok, digest ") != std::string::npos);

  Json bad = small_config();
  bad["seeds"] = Json::array();
  ingest::write_text(dir / "bad.json", bad.dump());
  const auto b = run({"validate", "--config", (dir / "bad.json").string()});
  CHECK(b.code == kUsageError);
  CHECK(b.err.find("EmptySeeds") != std::string::npos);
  ingest::write_text(dir / "junk.json", "{not json");
  CHECK(run({"validate", "--config", (dir / "junk.json").string()}).code == kUsageError);
}

TEST_CASE("synth writes a dataset") {
  oracle::TempDir dir("cli-synth");
  const auto r = run({"synth", "--preset", "fallacy30", "--seed", "2", "--out", (dir / "d").string()});
  REQUIRE(r.code == kOk);
  CHECK(ingest::load_manifest(dir / "d" / "manifest.json").records.size() == 60);
  CHECK(run({"synth", "--preset", "nope", "--out", (dir / "e").string()}).code == kUsageError);
  CHECK(!fs::exists(dir / "e"));
  CHECK(run({"synth", "--out", (dir / "f").string()}).code == kUsageError);
}

TEST_CASE("run, report and delta") {
  oracle::TempDir dir("cli-run");
  ingest::write_text(dir / "cfg.json", small_config().dump());
  const auto r = run({"run", "--config", (dir / "cfg.json").string(), "--out", (dir / "a").string()});
  INFO(r.err);
  REQUIRE(r.code == kOk);
  CHECK(fs::exists(dir / "a" / "results.json"));
  CHECK(fs::exists(dir / "a" / "results.csv"));
  CHECK(r.out.find("cross_session") != std::string::npos);

  const auto s = run({"run", "--config", (dir / "cfg.json").string(), "--out", (dir / "b").string(), "--regime",
                      "single_session", "--jobs", "2"});
  REQUIRE(s.code == kOk);
  const auto j = Json::parse(ingest::read_text(dir / "b" / "results.json"));
  CHECK(j["cells"].size() == 1);

  const auto rep = run({"report", (dir / "a" / "results.json").string(), (dir / "b" / "results.json").string()});
  CHECK(rep.code == kOk);
  const auto d = run({"report", "--delta", (dir / "b" / "results.json").string(), (dir / "a" / "results.json").string()});
  CHECK(d.code == kOk);
  CHECK(run({"report", (dir / "nope.json").string()}).code == kUsageError);

  // an unknown regime on the command line is a config problem
  CHECK(run({"run", "--config", (dir / "cfg.json").string(), "--out", (dir / "c").string(), "--regime", "bogus"}).code ==
        kUsageError);
  CHECK(!fs::exists(dir / "c"));
}

TEST_CASE("evaluation failures exit with 1 and leave no partial output") {
  oracle::TempDir dir("cli-fail");
  Json cfg = small_config();
  cfg["regime"] = {{"names", {"ss_short_term"}}, {"settings", {"closed"}}};  // one record per day
  ingest::write_text(dir / "cfg.json", cfg.dump());
  const auto r = run({"run", "--config", (dir / "cfg.json").string(), "--out", (dir / "o").string()});
  CHECK(r.code == kEvaluationError);
  CHECK(!fs::exists(dir / "o" / "results.json"));
}

}
