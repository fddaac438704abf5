// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <set>

#include "ecgbench/error.hpp"
#include "ecgbench/regimes.hpp"
#include "ecgbench/synth.hpp"

using namespace ecgbench;
using namespace ecgbench::regimes;

namespace {

ingest::DatasetIndex index_of(const std::vector<std::tuple<std::string, std::string, unsigned, unsigned>>& rows) {
  ingest::DatasetIndex idx;
  for (const auto& [subject, session, day, rec] : rows) {
    ingest::RecordMeta m;
    m.subject_id = subject;
    m.session_id = session;
    m.day_index = day;
    m.record_index = rec;
    m.path = subject + "_" + session + ".f32";
    m.fs = 360;
    idx.records.push_back(m);
  }
  return idx;
}

std::vector<std::size_t> records_of(const std::vector<Portion>& ps) {
  std::vector<std::size_t> out;
  for (const auto& p : ps) out.push_back(p.record);
  return out;
}

RegimeSpec spec(RegimeName name, Setting setting = Setting::closed) {
  RegimeSpec s;
  s.name = name;
  s.setting = setting;
  return s;
}

// two subjects, three records each on days 0, 0, 3
ingest::DatasetIndex three_records() {
  return index_of({{"A", "s1", 0, 0}, {"A", "s2", 0, 1}, {"A", "s3", 3, 0},
                   {"B", "s1", 0, 0}, {"B", "s2", 0, 1}, {"B", "s3", 3, 0}});
}

SeedRecord seed_record(std::uint64_t seed, double eer) {
  SeedRecord r;
  r.seed = seed;
  SeedMetrics m;
  m.eer = eer;
  m.rank1 = 1.0;
  r.cells[{RegimeName::single_session, Setting::closed}] = m;
  return r;
}

}  // namespace

TEST_SUITE("regimes") {

TEST_CASE("regime table on days [0, 0, 3]") {
  const auto idx = three_records();
  struct Row {
    RegimeName name;
    std::vector<std::size_t> enroll, probe;
  };
  const Row rows[] = {
      {RegimeName::single_session, {0}, {0}},
      {RegimeName::single_cross_session, {0}, {1}},
      {RegimeName::ss_short_term, {0}, {1}},
      {RegimeName::llo_short_term, {0}, {1}},
      {RegimeName::ss_long_term, {0, 1}, {2}},
      {RegimeName::llo_long_term, {0, 1}, {2}},
      {RegimeName::cross_session, {0}, {1}},
  };
  for (const auto& row : rows) {
    CAPTURE(to_string(row.name));
    const auto plan = map_regime(idx, spec(row.name));
    REQUIRE(plan.subjects.size() == 2);
    CHECK(plan.subjects[0].subject_id == "A");
    CHECK(records_of(plan.subjects[0].enroll) == row.enroll);
    CHECK(records_of(plan.subjects[0].probe) == row.probe);
    CHECK(plan.subjects[0].beat_split == (row.name == RegimeName::single_session));
    CHECK(plan.excluded.empty());
  }
}

TEST_CASE("short-term enrollment and probe differ on longer days") {
  const auto idx = index_of({{"A", "x", 0, 0}, {"A", "x", 0, 1}, {"A", "x", 0, 2}, {"A", "x", 5, 0}, {"A", "x", 9, 0}});
  const auto ss = map_regime(idx, spec(RegimeName::ss_short_term)).subjects[0];
  CHECK(records_of(ss.enroll) == std::vector<std::size_t>{0});
  CHECK(records_of(ss.probe) == std::vector<std::size_t>{1, 2});
  const auto llo = map_regime(idx, spec(RegimeName::llo_short_term)).subjects[0];
  CHECK(records_of(llo.enroll) == std::vector<std::size_t>{0, 1});
  CHECK(records_of(llo.probe) == std::vector<std::size_t>{2});
  const auto sl = map_regime(idx, spec(RegimeName::ss_long_term)).subjects[0];
  CHECK(records_of(sl.enroll) == std::vector<std::size_t>{0, 1, 2});
  CHECK(records_of(sl.probe) == std::vector<std::size_t>{3, 4});
  const auto ll = map_regime(idx, spec(RegimeName::llo_long_term)).subjects[0];
  CHECK(records_of(ll.enroll) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(records_of(ll.probe) == std::vector<std::size_t>{4});
}

TEST_CASE("unsatisfiable regimes") {
  const auto single = index_of({{"A", "s1", 0, 0}, {"B", "s1", 0, 0}});
  for (auto name : {RegimeName::single_cross_session, RegimeName::ss_short_term, RegimeName::ss_long_term,
                    RegimeName::llo_long_term, RegimeName::cross_session}) {
    CAPTURE(to_string(name));
    try {
      map_regime(single, spec(name));
      FAIL("expected RegimeUnsatisfiable");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::RegimeUnsatisfiable);
    }
  }
  // partial: B has one day only and is excluded with a reason
  const auto mixed = index_of({{"A", "s1", 0, 0}, {"A", "s2", 4, 0}, {"B", "s1", 0, 0}});
  const auto plan = map_regime(mixed, spec(RegimeName::ss_long_term));
  CHECK(plan.subjects.size() == 1);
  REQUIRE(plan.excluded.size() == 1);
  CHECK(plan.excluded[0].subject_id == "B");
  CHECK(!plan.excluded[0].reason.empty());
  CHECK(plan.subjects_total == 2);
}

TEST_CASE("explicit cross-session pair") {
  const auto idx = three_records();
  auto s = spec(RegimeName::cross_session);
  s.enroll_session = "s3";
  s.probe_session = "s1";
  const auto plan = map_regime(idx, s);
  CHECK(records_of(plan.subjects[1].enroll) == std::vector<std::size_t>{5});
  CHECK(records_of(plan.subjects[1].probe) == std::vector<std::size_t>{3});
  s.probe_session = "zz";
  CHECK_THROWS_AS(map_regime(idx, s), Error);
}

TEST_CASE("open setting partitions subjects") {
  std::vector<std::tuple<std::string, std::string, unsigned, unsigned>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({"S" + std::to_string(i), "a", 0, 0});
  const auto plan = map_regime(index_of(rows), spec(RegimeName::single_session, Setting::open));
  CHECK(plan.training_subjects.size() == 5);
  CHECK(plan.evaluation_subjects.size() == 5);
  std::set<std::string> all(plan.training_subjects.begin(), plan.training_subjects.end());
  for (const auto& s : plan.evaluation_subjects) CHECK(all.insert(s).second);
  CHECK(all.size() == 10);

  const auto one = index_of({{"A", "s1", 0, 0}});
  try {
    map_regime(one, spec(RegimeName::single_session, Setting::open));
    FAIL("expected TooFewSubjects");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSubjects);
  }
}

TEST_CASE("subject partition") {
  const std::vector<std::string> ids{"e", "a", "c", "b", "d"};
  const auto [t1, e1] = subject_partition(ids, 0.5, 3);
  const auto [t2, e2] = subject_partition({"a", "b", "c", "d", "e"}, 0.5, 3);
  CHECK(t1 == t2);
  CHECK(e1 == e2);
  CHECK(t1.size() == 3);  // round(2.5) away from zero
  CHECK(std::is_sorted(t1.begin(), t1.end()));
  const auto [t3, e3] = subject_partition(ids, 0.01, 3);
  CHECK(t3.size() == 1);
  const auto [t4, e4] = subject_partition(ids, 0.99, 3);
  CHECK(e4.size() == 1);
  int differ = 0;
  for (std::uint64_t s = 0; s < 10; ++s) differ += subject_partition(ids, 0.5, s).first != t1;
  CHECK(differ > 0);
  CHECK_THROWS_AS(subject_partition(ids, 1.0, 0), Error);
}

TEST_CASE("beat split") {
  const auto e = split_beats(10, 0.7, 1);
  CHECK(e.size() == 7);
  CHECK(std::is_sorted(e.begin(), e.end()));
  CHECK(std::set<std::size_t>(e.begin(), e.end()).size() == 7);
  CHECK(split_beats(10, 0.7, 1) == e);
  CHECK(e.back() < 10);
}

TEST_CASE("temporal windows") {
  Recording rec;
  rec.fs = 10;
  rec.channels = {Signal(100)};
  for (std::size_t i = 0; i < 100; ++i) rec.channels[0][i] = static_cast<double>(i);
  const auto [e, p] = temporal_windows(rec, {0.0, 3.0}, {5.0, 10.0});
  CHECK(e.length() == 30);
  CHECK(p.length() == 50);
  CHECK(p.channels[0].front() == 50.0);
  CHECK(e.channels[0].back() == 29.0);
  // touching ranges do not overlap
  CHECK_NOTHROW(temporal_windows(rec, {0.0, 5.0}, {5.0, 10.0}));
  auto code = [&](TimeRange a, TimeRange b) {
    try {
      temporal_windows(rec, a, b);
    } catch (const Error& err) {
      return err.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code({0.0, 6.0}, {5.0, 10.0}) == ErrorCode::OverlappingRanges);
  CHECK(code({0.0, 3.0}, {5.0, 11.0}) == ErrorCode::RangeOutOfBounds);
}

TEST_CASE("aggregation") {
  const auto rep = aggregate_runs({seed_record(0, 0.1), seed_record(1, 0.2), seed_record(2, 0.3)});
  const auto& c = rep.cells.at({RegimeName::single_session, Setting::closed});
  CHECK(c.eer.mean == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(c.eer.std == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(c.rank1.std == 0.0);
  CHECK(rep.seeds == std::vector<std::uint64_t>{0, 1, 2});

  auto odd = seed_record(3, 0.4);
  odd.cells[{RegimeName::cross_session, Setting::closed}] = {};
  try {
    aggregate_runs({seed_record(0, 0.1), odd});
    FAIL("expected KeyMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KeyMismatch);
  }
  const auto single = aggregate_runs({seed_record(0, 0.25)});
  CHECK(single.cells.begin()->second.eer.std == 0.0);
  CHECK(mean_std({1, 2, 3, 4}).std == doctest::Approx(1.2909944487358056).epsilon(1e-14));
}

TEST_CASE("prepared plans are leak-free and the parallel path matches") {
  auto ds = synth::preset("aging4");
  ds.n_subjects = 3;
  ds.duration_s = 20;
  const auto syn = synth::synthesize_dataset(ds, 5);
  std::vector<Recording> recs;
  for (const auto& r : syn.records) recs.push_back(r.recording);
  const RunConfig cfg = validate_config(Json::parse(R"({"dataset": {"manifest": "m.json"}})"));
  const auto par = prepare_dataset(syn.index, recs, cfg);
  const auto ser = prepare_dataset_serial(syn.index, recs, cfg);
  REQUIRE(par.records.size() == ser.records.size());
  for (std::size_t i = 0; i < par.records.size(); ++i) CHECK(par.records[i].inputs == ser.records[i].inputs);

  for (auto name : {RegimeName::single_session, RegimeName::single_cross_session, RegimeName::ss_short_term,
                    RegimeName::llo_short_term, RegimeName::ss_long_term, RegimeName::llo_long_term,
                    RegimeName::cross_session}) {
    for (auto setting : {Setting::closed, Setting::open}) {
      CAPTURE(to_string(name));
      RegimeSpec s = spec(name, setting);
      if (par.index.records.size() == 12 && (name == RegimeName::ss_short_term || name == RegimeName::llo_short_term)) {
        CHECK_THROWS_AS(map_regime(par.index, s), Error);  // one record per day
        continue;
      }
      const auto plan = map_regime(par.index, s);
      const auto assignment = materialize(plan, par);
      CHECK(find_leakage(plan, assignment, par).empty());
      for (const auto& a : assignment) {
        CHECK(!a.enroll.empty());
        CHECK(!a.probe_groups.empty());
      }
    }
  }

  // a plan that enrolls and probes on the same record is flagged
  auto plan = map_regime(par.index, spec(RegimeName::single_cross_session));
  plan.subjects[0].probe = plan.subjects[0].enroll;
  CHECK(!find_leakage(plan, materialize(plan, par), par).empty());
  // overlapping open partitions are flagged
  auto open = map_regime(par.index, spec(RegimeName::cross_session, Setting::open));
  open.evaluation_subjects.push_back(open.training_subjects.front());
  CHECK(!find_leakage(open, materialize(open, par), par).empty());
}

}
