// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/biometric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ecgbench/error.hpp"
#include "ecgbench/random.hpp"

namespace ecgbench::biometric {

std::optional<std::size_t> ScoreMatrix::true_column(std::size_t p) const {
  auto it = std::lower_bound(gallery_subjects.begin(), gallery_subjects.end(), probe_subjects[p]);
  if (it == gallery_subjects.end() || *it != probe_subjects[p]) return std::nullopt;
  return static_cast<std::size_t>(it - gallery_subjects.begin());
}

namespace {

double cosine(std::span<const double> a, std::span<const double> b, ErrorCode zero_code) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  require(na > 0.0 && nb > 0.0, zero_code,
          zero_code == ErrorCode::ZeroVector ? "cosine of a zero vector" : "pearson of a constant vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<double> centred(std::span<const double> v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - mean;
  return out;
}

}  // namespace

double similarity(std::span<const double> a, std::span<const double> b, Metric metric) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch,
          "vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  require(a.size() >= 2, ErrorCode::InvalidArgument, "similarity needs dimension >= 2");
  switch (metric) {
    case Metric::cosine:
      return cosine(a, b, ErrorCode::ZeroVector);
    case Metric::pearson: {
      const auto ca = centred(a);
      const auto cb = centred(b);
      return cosine(ca, cb, ErrorCode::ConstantVector);
    }
    case Metric::euclidean: {
      double ss = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
      return -std::sqrt(ss);
    }
  }
  return 0.0;
}

Template build_template(const std::vector<Vector>& embeddings, Fusion fusion, std::optional<std::size_t> size,
                        Metric metric, std::string subject_id) {
  require(!embeddings.empty(), ErrorCode::EmptyEnrollment, "no enrollment embeddings for '" + subject_id + "'");
  require(!size || *size >= 1, ErrorCode::InvalidArgument, "template size must be >= 1");
  const std::size_t count = size ? std::min(*size, embeddings.size()) : embeddings.size();
  const std::size_t dim = embeddings.front().size();
  for (std::size_t i = 0; i < count; ++i) {
    require(embeddings[i].size() == dim, ErrorCode::DimensionMismatch, "enrollment embeddings differ in length");
  }

  Template t;
  t.subject_id = std::move(subject_id);
  t.fusion = fusion;
  t.source_count = count;
  if (fusion == Fusion::mean) {
    t.vector.assign(dim, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t d = 0; d < dim; ++d) t.vector[d] += embeddings[i][d];
    }
    for (auto& v : t.vector) v /= static_cast<double>(count);
    return t;
  }

  std::size_t best = 0;
  double best_cost = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double cost = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      if (j != i) cost += 1.0 - similarity(embeddings[i], embeddings[j], metric);
    }
    if (i == 0 || cost < best_cost) {
      best = i;
      best_cost = cost;
    }
  }
  t.vector = embeddings[best];
  return t;
}

std::vector<Vector> fuse_probes(const std::vector<Vector>& embeddings, std::size_t k) {
  require(!embeddings.empty(), ErrorCode::InvalidArgument, "no probe embeddings");
  require(k >= 1, ErrorCode::InvalidArgument, "probe fusion k must be >= 1");
  auto mean_of = [&](std::size_t begin, std::size_t end) {
    Vector v(embeddings[begin].size(), 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      require(embeddings[i].size() == v.size(), ErrorCode::DimensionMismatch, "probe embeddings differ in length");
      for (std::size_t d = 0; d < v.size(); ++d) v[d] += embeddings[i][d];
    }
    for (auto& x : v) x /= static_cast<double>(end - begin);
    return v;
  };
  if (embeddings.size() < k) return {mean_of(0, embeddings.size())};
  if (k == 1) return embeddings;
  std::vector<Vector> out;
  for (std::size_t start = 0; start + k <= embeddings.size(); start += k) out.push_back(mean_of(start, start + k));
  return out;
}

namespace {

struct SortedGallery {
  std::vector<const Template*> order;
  std::vector<std::string> subjects;
};

SortedGallery sort_gallery(const std::vector<Template>& gallery, const std::vector<Probe>& probes) {
  require(!gallery.empty(), ErrorCode::InvalidArgument, "empty gallery");
  require(!probes.empty(), ErrorCode::InvalidArgument, "no probes");
  SortedGallery g;
  for (const auto& t : gallery) g.order.push_back(&t);
  std::sort(g.order.begin(), g.order.end(), [](auto* a, auto* b) { return a->subject_id < b->subject_id; });
  for (auto* t : g.order) {
    require(g.subjects.empty() || g.subjects.back() != t->subject_id, ErrorCode::InvalidArgument,
            "gallery holds two templates for '" + t->subject_id + "'");
    g.subjects.push_back(t->subject_id);
  }
  return g;
}

ScoreMatrix empty_matrix(const SortedGallery& g, const std::vector<Probe>& probes) {
  ScoreMatrix m;
  m.rows = probes.size();
  m.cols = g.order.size();
  m.scores.assign(m.rows * m.cols, 0.0);
  m.gallery_subjects = g.subjects;
  for (const auto& p : probes) m.probe_subjects.push_back(p.true_subject);
  return m;
}

void fill_row(ScoreMatrix& m, const SortedGallery& g, const Probe& probe, std::size_t row, Metric metric) {
  for (std::size_t c = 0; c < m.cols; ++c) m.scores[row * m.cols + c] = similarity(probe.vector, g.order[c]->vector, metric);
}

}  // namespace

ScoreMatrix score_matrix_serial(const std::vector<Template>& gallery, const std::vector<Probe>& probes, Metric metric) {
  const auto g = sort_gallery(gallery, probes);
  ScoreMatrix m = empty_matrix(g, probes);
  for (std::size_t r = 0; r < probes.size(); ++r) fill_row(m, g, probes[r], r, metric);
  return m;
}

ScoreMatrix score_matrix(const std::vector<Template>& gallery, const std::vector<Probe>& probes, Metric metric) {
  const auto g = sort_gallery(gallery, probes);
  ScoreMatrix m = empty_matrix(g, probes);
  const auto rows = static_cast<std::ptrdiff_t>(probes.size());
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    try {
      fill_row(m, g, probes[static_cast<std::size_t>(r)], static_cast<std::size_t>(r), metric);
    } catch (...) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) return score_matrix_serial(gallery, probes, metric);
  return m;
}

PairScores generate_pairs(const ScoreMatrix& matrix, PairSampling mode, std::uint64_t seed) {
  PairScores out;
  out.sampling = mode;
  out.seed = seed;
  std::vector<double> candidates;
  for (std::size_t p = 0; p < matrix.rows; ++p) {
    const auto own = matrix.true_column(p);
    for (std::size_t g = 0; g < matrix.cols; ++g) {
      (own && *own == g ? out.genuine : candidates).push_back(matrix.at(p, g));
    }
  }
  require(!out.genuine.empty(), ErrorCode::NoGenuinePairs, "no probe matches an enrolled subject");
  require(!candidates.empty(), ErrorCode::InvalidArgument, "no impostor cells");
  if (mode == PairSampling::all) {
    out.impostor = std::move(candidates);
    return out;
  }
  // Partial Fisher-Yates: the first `take` cells of a seeded permutation.
  const std::size_t take = std::min(out.genuine.size(), candidates.size());
  Rng rng(derive_seed(seed, "impostor-pairs"));
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = std::uniform_int_distribution<std::size_t>(i, candidates.size() - 1)(rng);
    std::swap(candidates[i], candidates[j]);
  }
  out.impostor.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take));
  return out;
}

}  // namespace ecgbench::biometric
