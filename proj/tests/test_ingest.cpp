// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>

#include "ecgbench/error.hpp"
#include "ecgbench/ingest.hpp"
#include "oracles.hpp"

using namespace ecgbench;
using namespace ecgbench::ingest;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ecgbench::Error");
  return ErrorCode::InvalidArgument;
}

const char* kFourRecords = R"({"records": [
  {"subject": "B", "session": "s2", "day": 5, "record_index": 0, "path": "b2.f32", "format": "f32le", "fs": 360},
  {"subject": "A", "session": "s2", "day": 3, "record_index": 0, "path": "a2.f32", "format": "f32le", "fs": 360},
  {"subject": "B", "session": "s1", "day": 0, "record_index": 0, "path": "b1.f32", "format": "f32le", "fs": 360},
  {"subject": "A", "session": "s1", "day": 0, "record_index": 0, "path": "a1.f32", "format": "f32le", "fs": 360}
]})";

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("manifest of two subjects is sorted by subject, day, record") {
  const auto index = parse_manifest(kFourRecords, "/data");
  REQUIRE(index.records.size() == 4);
  CHECK(index.records[0].path.filename() == "a1.f32");
  CHECK(index.records[1].path.filename() == "a2.f32");
  CHECK(index.records[2].path.filename() == "b1.f32");
  CHECK(index.records[3].path.filename() == "b2.f32");
  CHECK(index.records[0].path == std::filesystem::path("/data/a1.f32"));
  CHECK(index.subjects() == std::vector<std::string>{"A", "B"});
}

TEST_CASE("manifest order does not depend on declaration order") {
  auto j = Json::parse(kFourRecords);
  auto reversed = j;
  std::reverse(reversed["records"].begin(), reversed["records"].end());
  const auto a = parse_manifest(j.dump());
  const auto b = parse_manifest(reversed.dump());
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i].path == b.records[i].path);
}

TEST_CASE("manifest errors") {
  CHECK(code_of([] {
          parse_manifest(R"({"records": [
            {"subject": "A", "session": "s1", "record_index": 0, "path": "x.f32", "format": "f32le", "fs": 360},
            {"subject": "A", "session": "s1", "record_index": 0, "path": "y.f32", "format": "f32le", "fs": 360}]})");
        }) == ErrorCode::DuplicateRecordKey);
  CHECK(code_of([] {
          parse_manifest(R"({"records": [
            {"subject": "A", "session": "s1", "path": "x.f32", "format": "f32le", "fs": -1}]})");
        }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_manifest(R"({"records": [{"subject": "A", "path": "x.f32"}]})"); }) ==
        ErrorCode::SchemaError);
  CHECK(code_of([] {
          parse_manifest(R"({"records": [
            {"subject": "A", "session": "s1", "path": "x.f32", "format": "f32le", "fs": 360, "extra": 1}]})");
        }) == ErrorCode::SchemaError);
  CHECK(code_of([] { parse_manifest("not json"); }) == ErrorCode::SchemaError);
}

TEST_CASE("dates become day offsets and missing record indices are sequential") {
  const auto index = parse_manifest(R"({"records": [
    {"subject": "A", "session": "x", "date": "2020-02-27", "path": "1.f32", "format": "f32le", "fs": 360},
    {"subject": "A", "session": "y", "date": "2020-03-01", "path": "2.f32", "format": "f32le", "fs": 360},
    {"subject": "A", "session": "z", "date": "2020-03-01", "path": "3.f32", "format": "f32le", "fs": 360}]})");
  REQUIRE(index.records.size() == 3);
  CHECK(index.records[0].day_index == 0);
  CHECK(index.records[1].day_index == 3);  // 2020 is a leap year
  CHECK(index.records[1].record_index == 0);
  CHECK(index.records[2].record_index == 1);
}

TEST_CASE("manifest_json round trip") {
  const auto index = parse_manifest(kFourRecords, "/data");
  const auto again = parse_manifest(manifest_json(index, "/data").dump(), "/data");
  REQUIRE(again.records.size() == index.records.size());
  for (std::size_t i = 0; i < index.records.size(); ++i) {
    CHECK(again.records[i].path == index.records[i].path);
    CHECK(again.records[i].provenance() == index.records[i].provenance());
  }
}

TEST_CASE("WFDB header: record line and two 212 signals") {
  const auto h = parse_wfdb_header(
      "# comment line\n"
      "r1 2 360 650000\n"
      "r1.dat 212 200 11 1024 995 -22131 0 MLII\n"
      "r1.dat 212 200(12)/mV 11 1024 1011 20052 0 V5\n");
  CHECK(h.record_name == "r1");
  CHECK(h.n_signals == 2);
  CHECK(h.fs == 360.0);
  CHECK(h.n_samples == 650000);
  REQUIRE(h.signals.size() == 2);
  CHECK(h.signals[0].format == 212);
  CHECK(h.signals[0].adc_gain == 200.0);
  CHECK(h.signals[0].baseline == 1024.0);  // adc_zero when no baseline is given
  CHECK(h.signals[0].description == "MLII");
  CHECK(h.signals[1].baseline == 12.0);
  CHECK(h.signals[1].units == "mV");
}

TEST_CASE("WFDB header defaults and rejections") {
  const auto h = parse_wfdb_header("rec 1\nrec.dat 16\n");
  CHECK(h.fs == 250.0);
  CHECK(h.signals[0].adc_gain == 200.0);
  CHECK(code_of([] { parse_wfdb_header("r 1 360\nr.dat 80 200\n"); }) == ErrorCode::UnsupportedFormat);
  CHECK(code_of([] { parse_wfdb_header("r/2 1 360\nr.dat 212 200\n"); }) == ErrorCode::MalformedHeaderLine);
  CHECK(code_of([] { parse_wfdb_header("r 1 360\nr.dat 212x2 200\n"); }) == ErrorCode::MalformedHeaderLine);
  CHECK(code_of([] { parse_wfdb_header("r 1 360\nr.dat 16+512 200\n"); }) == ErrorCode::MalformedHeaderLine);
  CHECK(code_of([] { parse_wfdb_header("r 2 360\nr.dat 16 200\n"); }) == ErrorCode::MalformedHeaderLine);
  // counter frequency is accepted and ignored
  CHECK(parse_wfdb_header("r 1 360/2\nr.dat 16 200\n").fs == 360.0);
}

TEST_CASE("format 212 decoding, hand-packed") {
  const std::vector<std::uint8_t> a{0x01, 0x00, 0x02};
  CHECK(decode_wfdb_samples(a, 212, 1)[0] == std::vector<std::int32_t>{1, 2});
  const std::vector<std::uint8_t> b{0xFF, 0x0F, 0x00};
  CHECK(decode_wfdb_samples(b, 212, 1)[0] == std::vector<std::int32_t>{-1, 0});
  // s1 = 0x123, s2 = 0x800 (-2048): b0 = 0x23, b1 = (0x8 << 4) | 0x1, b2 = 0x00
  const std::vector<std::uint8_t> c{0x23, 0x81, 0x00};
  CHECK(decode_wfdb_samples(c, 212, 1)[0] == std::vector<std::int32_t>{0x123, -2048});
  // two signals interleave round-robin
  const std::vector<std::uint8_t> d{0x01, 0x00, 0x02, 0x03, 0x00, 0x04};
  const auto two = decode_wfdb_samples(d, 212, 2);
  CHECK(two[0] == std::vector<std::int32_t>{1, 3});
  CHECK(two[1] == std::vector<std::int32_t>{2, 4});
  // a trailing pair of bytes carries one more sample
  const std::vector<std::uint8_t> e{0x01, 0x00, 0x02, 0x05, 0x00};
  CHECK(decode_wfdb_samples(e, 212, 1)[0] == std::vector<std::int32_t>{1, 2, 5});
  const std::vector<std::uint8_t> f{0x01, 0x00, 0x02, 0x05};
  CHECK(code_of([&] { decode_wfdb_samples(f, 212, 1); }) == ErrorCode::TruncatedData);
}

TEST_CASE("format 16 decoding") {
  const std::vector<std::uint8_t> a{0x34, 0x12};
  CHECK(decode_wfdb_samples(a, 16, 1)[0] == std::vector<std::int32_t>{4660});
  const std::vector<std::uint8_t> b{0xFF, 0xFF, 0x00, 0x80};
  CHECK(decode_wfdb_samples(b, 16, 1)[0] == std::vector<std::int32_t>{-1, -32768});
  const std::vector<std::uint8_t> c{0x01, 0x00, 0x02, 0x00, 0x03};
  CHECK(code_of([&] { decode_wfdb_samples(c, 16, 2); }) == ErrorCode::TruncatedData);
}

TEST_CASE("212 round trip over every 12-bit value") {
  for (std::int32_t v = -2048; v < 2048; v += 1) {
    const AdcSamples s{{v, static_cast<std::int32_t>(-1 - v)}};
    const auto bytes = encode_wfdb_samples(s, 212);
    REQUIRE(bytes.size() == 3);
    CHECK(decode_wfdb_samples(bytes, 212, 1) == s);
    CHECK(encode_wfdb_samples(decode_wfdb_samples(bytes, 212, 1), 212) == bytes);
  }
}

TEST_CASE("adc_to_physical") {
  const std::vector<std::int32_t> a{200, 100};
  CHECK(adc_to_physical(a, 200, 0) == Signal{1.0, 0.5});
  const std::vector<std::int32_t> b{1024};
  CHECK(adc_to_physical(b, 200, 1024) == Signal{0.0});
  const std::vector<std::int32_t> c{0};
  CHECK(code_of([&] { adc_to_physical(c, 0, 0); }) == ErrorCode::ZeroGain);
  const std::vector<std::int32_t> d{7, -3, 11};
  const auto v = adc_to_physical(d, 3.0, 1.5);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(v[i] == (d[i] - 1.5) / 3.0);
}

TEST_CASE("load_record: f32le, csv, wfdb with channel selector") {
  oracle::TempDir dir("ingest");
  Signal x(5000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<float>(std::sin(0.01 * static_cast<double>(i)));
  write_f32le(dir / "x.f32", x);
  write_text(dir / "x.csv", "0.5\n-1.25\n3\n");
  write_text(dir / "bad.csv", "0.5\nabc\n");

  // two signals in one format-16 file
  const AdcSamples adc{{100, 200, 300}, {-400, 0, 400}};
  write_bytes(dir / "w.dat", encode_wfdb_samples(adc, 16));
  write_text(dir / "w.hea", "w 2 500 3\nw.dat 16 100 16 0 0 0 0 I\nw.dat 16 200(10) 16 0 0 0 0 II\n");

  const auto index = parse_manifest(R"({"records": [
    {"subject": "A", "session": "s1", "path": "x.f32", "format": "f32le", "fs": 500},
    {"subject": "B", "session": "s1", "path": "x.csv", "format": "csv", "fs": 250},
    {"subject": "C", "session": "s1", "path": "w.hea", "format": "wfdb", "channel": 1},
    {"subject": "D", "session": "s1", "path": "bad.csv", "format": "csv", "fs": 250},
    {"subject": "E", "session": "s1", "path": "missing.f32", "format": "f32le", "fs": 250}]})",
                                    dir.path());

  const auto a = load_record(index.records[0]);
  CHECK(a.fs == 500.0);
  REQUIRE(a.channels.size() == 1);
  CHECK(a.channels[0] == x);
  CHECK(a.provenance.subject_id == "A");

  const auto b = load_record(index.records[1]);
  CHECK(b.channels[0] == Signal{0.5, -1.25, 3.0});

  const auto c = load_record(index.records[2]);
  CHECK(c.fs == 500.0);
  REQUIRE(c.channels.size() == 1);
  CHECK(c.channels[0] == Signal{-410.0 / 200.0, -10.0 / 200.0, 390.0 / 200.0});

  CHECK(code_of([&] { load_record(index.records[3]); }) == ErrorCode::FormatMismatch);
  CHECK(code_of([&] { load_record(index.records[4]); }) == ErrorCode::IoError);
}

TEST_CASE("f32le with a non-finite sample is rejected") {
  oracle::TempDir dir("ingest");
  const float bad[2] = {1.0f, std::numeric_limits<float>::quiet_NaN()};
  std::ofstream(dir / "nan.f32", std::ios::binary).write(reinterpret_cast<const char*>(bad), sizeof bad);
  CHECK(code_of([&] { read_f32le(dir / "nan.f32"); }) == ErrorCode::FormatMismatch);
}

}
