// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ecgbench/biometric.hpp"
#include "ecgbench/error.hpp"

using namespace ecgbench;
using namespace ecgbench::biometric;

namespace {

std::vector<Vector> random_vectors(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<Vector> out(n, Vector(dim));
  for (auto& v : out)
    for (auto& x : v) x = d(rng);
  return out;
}

}  // namespace

TEST_SUITE("biometric") {

TEST_CASE("templates") {
  const auto mean = build_template({{1, 0}, {0, 1}}, Fusion::mean, std::nullopt, Metric::cosine, "A");
  CHECK(mean.vector == Vector{0.5, 0.5});
  CHECK(mean.source_count == 2);
  CHECK(mean.subject_id == "A");

  const auto medoid = build_template({{1, 0}, {2, 0}, {10, 0}}, Fusion::representative, std::nullopt, Metric::euclidean);
  CHECK(medoid.vector == Vector{2, 0});

  const std::vector<Vector> e{{3, 1}, {1, 3}, {2, 2}};
  for (auto f : {Fusion::mean, Fusion::representative}) {
    const auto t = build_template(e, f, 1, Metric::cosine);
    CHECK(t.vector == e[0]);
    CHECK(t.source_count == 1);
  }
  CHECK_THROWS_AS(build_template({}, Fusion::mean, std::nullopt, Metric::cosine), Error);
}

TEST_CASE("medoid ties go to the earliest member and the output is an input") {
  const auto t = build_template({{1, 0}, {1, 0}, {0, 1}}, Fusion::representative, std::nullopt, Metric::cosine);
  CHECK(t.vector == Vector{1, 0});
  const auto vs = random_vectors(9, 5, 4);
  for (auto m : {Metric::cosine, Metric::euclidean, Metric::pearson}) {
    const auto r = build_template(vs, Fusion::representative, std::nullopt, m);
    CHECK(std::find(vs.begin(), vs.end(), r.vector) != vs.end());
  }
}

TEST_CASE("mean fusion ignores enrollment order") {
  auto vs = random_vectors(6, 4, 8);
  const auto a = build_template(vs, Fusion::mean, std::nullopt, Metric::cosine);
  std::reverse(vs.begin(), vs.end());
  const auto b = build_template(vs, Fusion::mean, std::nullopt, Metric::cosine);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a.vector[i] == doctest::Approx(b.vector[i]).epsilon(1e-14));
}

TEST_CASE("probe fusion grouping") {
  std::vector<Vector> seven;
  for (int i = 0; i < 7; ++i) seven.push_back({static_cast<double>(i), 1.0});
  const auto p = fuse_probes(seven, 3);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == Vector{1.0, 1.0});
  CHECK(p[1] == Vector{4.0, 1.0});
  const auto two = fuse_probes({{1, 2}, {3, 4}}, 3);
  REQUIRE(two.size() == 1);
  CHECK(two[0] == Vector{2, 3});
  CHECK(fuse_probes(seven, 1) == seven);
}

TEST_CASE("similarities") {
  const Vector a{1, 0}, b{1, 1};
  CHECK(similarity(a, a, Metric::cosine) == 1.0);
  CHECK(similarity(a, b, Metric::cosine) == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(similarity(Vector{1, 2, 3}, Vector{2, 4, 6}, Metric::pearson) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(similarity(Vector{0, 0}, Vector{3, 4}, Metric::euclidean) == -5.0);
  CHECK_THROWS_AS(similarity(Vector{0, 0}, b, Metric::cosine), Error);
  CHECK_THROWS_AS(similarity(Vector{2, 2}, b, Metric::pearson), Error);
  CHECK_THROWS_AS(similarity(Vector{1, 2, 3}, b, Metric::cosine), Error);
}

TEST_CASE("cosine and pearson are scale-invariant; euclidean ranking is not") {
  const Vector a{1, 2, 3, 5};
  const Vector b{2, 1, 4, 3};
  Vector a7 = a;
  for (auto& v : a7) v *= 7.0;
  CHECK(similarity(a7, b, Metric::cosine) == doctest::Approx(similarity(a, b, Metric::cosine)).epsilon(1e-14));
  CHECK(similarity(a7, b, Metric::pearson) == doctest::Approx(similarity(a, b, Metric::pearson)).epsilon(1e-14));
  // probe x sits closer to g1 than to g2 in Euclidean terms; scaling x flips that order
  const Vector g1{1, 0}, g2{10, 2}, x{1, 0.3};
  Vector x10 = x;
  for (auto& v : x10) v *= 10.0;
  CHECK(similarity(x, g1, Metric::euclidean) > similarity(x, g2, Metric::euclidean));
  CHECK(similarity(x10, g1, Metric::euclidean) < similarity(x10, g2, Metric::euclidean));
  CHECK((similarity(x, g1, Metric::cosine) > similarity(x, g2, Metric::cosine)) ==
        (similarity(x10, g1, Metric::cosine) > similarity(x10, g2, Metric::cosine)));
}

TEST_CASE("score matrix") {
  const auto vs = random_vectors(3, 6, 1);
  std::vector<Template> gallery;
  std::vector<Probe> probes;
  const char* ids[3] = {"C", "A", "B"};
  for (int i = 0; i < 3; ++i) {
    gallery.push_back(build_template({vs[static_cast<std::size_t>(i)]}, Fusion::mean, std::nullopt, Metric::cosine, ids[i]));
    probes.push_back({vs[static_cast<std::size_t>(i)], ids[i]});
  }
  const auto m = score_matrix(gallery, probes, Metric::cosine);
  CHECK(m.gallery_subjects == std::vector<std::string>{"A", "B", "C"});
  CHECK(m.rows == 3);
  CHECK(m.cols == 3);
  for (std::size_t p = 0; p < 3; ++p) {
    const auto t = *m.true_column(p);
    CHECK(m.at(p, t) == doctest::Approx(1.0));
    for (std::size_t g = 0; g < 3; ++g) CHECK(m.at(p, g) <= m.at(p, t));
  }
  // same set as gallery and probes: symmetric once rows follow the column order
  std::vector<Probe> sorted_probes{{vs[1], "A"}, {vs[2], "B"}, {vs[0], "C"}};
  const auto s = score_matrix(gallery, sorted_probes, Metric::cosine);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(s.at(i, j) == doctest::Approx(s.at(j, i)).epsilon(1e-14));

  probes.push_back({vs[0], "C"});
  CHECK(score_matrix(gallery, probes, Metric::cosine).rows == 4);
  const auto ser = score_matrix_serial(gallery, probes, Metric::cosine);
  CHECK(ser.scores == score_matrix(gallery, probes, Metric::cosine).scores);

  // permuting probes permutes rows
  std::vector<Probe> permuted{probes[3], probes[0], probes[2], probes[1]};
  const auto pm = score_matrix(gallery, permuted, Metric::cosine);
  const auto base = score_matrix(gallery, probes, Metric::cosine);
  const std::size_t from[4] = {3, 0, 2, 1};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t g = 0; g < 3; ++g) CHECK(pm.at(r, g) == base.at(from[r], g));
}

TEST_CASE("pair generation") {
  ScoreMatrix m;
  m.rows = 10;
  m.cols = 10;
  for (std::size_t i = 0; i < 10; ++i) {
    m.gallery_subjects.push_back("S" + std::to_string(i));
    m.probe_subjects.push_back("S" + std::to_string(i));
  }
  for (std::size_t i = 0; i < 100; ++i) m.scores.push_back(static_cast<double>(i));
  const auto bal = generate_pairs(m, PairSampling::balanced, 4);
  CHECK(bal.genuine.size() == 10);
  CHECK(bal.impostor.size() == 10);
  CHECK(generate_pairs(m, PairSampling::balanced, 4).impostor == bal.impostor);
  const auto all = generate_pairs(m, PairSampling::all, 4);
  CHECK(all.impostor.size() == 90);
  std::set<double> distinct(bal.impostor.begin(), bal.impostor.end());
  CHECK(distinct.size() == 10);  // without replacement
  for (double g : bal.genuine) CHECK(static_cast<std::size_t>(g) % 11 == 0);

  ScoreMatrix none = m;
  for (auto& s : none.probe_subjects) s = "X";
  CHECK_THROWS_AS(generate_pairs(none, PairSampling::balanced, 1), Error);
}

}
