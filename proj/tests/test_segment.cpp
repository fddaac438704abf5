// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ecgbench/error.hpp"
#include "ecgbench/segment.hpp"

using namespace ecgbench;
using namespace ecgbench::segment;

TEST_SUITE("segment") {

TEST_CASE("align_peak") {
  Signal x(100, 0.0);
  x[50] = 2.0;
  x[47] = 1.0;
  CHECK(align_peak(x, 47, 100.0) == 50);
  CHECK(align_peak(x, 50, 100.0) == 50);
  CHECK(align_peak(x, align_peak(x, 47, 100.0), 100.0) == align_peak(x, 47, 100.0));
  Signal plateau(100, 0.0);
  plateau[40] = plateau[41] = plateau[42] = 1.0;
  CHECK(align_peak(plateau, 42, 100.0) == 40);
  Signal inverted(100, 0.0);
  inverted[30] = -3.0;
  inverted[32] = 1.0;
  CHECK(align_peak(inverted, 32, 100.0) == 30);
}

TEST_CASE("beat geometry at fs 500") {
  Signal x(5000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  const std::vector<std::size_t> peaks{10, 500, 1000, 4900};
  const auto segs = segment_beats(x, 500, peaks, 0.2, 0.4, false);
  REQUIRE(segs.size() == 2);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(segs[i].samples.size() == 300);
    CHECK(segs[i].samples[100] == static_cast<double>(segs[i].peak));
    CHECK(segs[i].position == i);
    CHECK(segs[i].start + 100 == segs[i].peak);
  }
  CHECK(segs[0].peak == 500);
}

TEST_CASE("ten in-bounds peaks") {
  Signal x(10000, 1.0);
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < 10; ++i) peaks.push_back(500 + 900 * i);
  const auto segs = segment_beats(x, 500, peaks, 0.2, 0.4, true);
  REQUIRE(segs.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(segs[i].position == i);
}

TEST_CASE("blind windows") {
  const Signal x(1000, 0.5);
  const auto w = segment_blind(x, 100, 5.0, 2.5);
  REQUIRE(w.size() == 3);
  CHECK(w[1].start == 250);
  CHECK(w[2].start == 500);
  CHECK(w[0].samples.size() == 500);
  CHECK(w[0].end() - w[1].start == 250);
  CHECK(segment_blind(x, 100, 10.0, 1.0).size() == 1);
  CHECK_THROWS_AS(segment_blind(x, 100, 11.0, 1.0), Error);
  const auto b = as_beat(w[1]);
  CHECK(b.start == 250);
  CHECK(b.samples.size() == 500);
}

}
