// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecgbench/config.hpp"

namespace ecgbench::biometric {

using Vector = std::vector<double>;

struct Template {
  Vector vector;
  std::string subject_id;
  Fusion fusion = Fusion::mean;
  std::size_t source_count = 0;
  std::vector<std::string> sessions;
};

struct Probe {
  Vector vector;
  std::string true_subject;
};

/// probes x gallery scores; columns sorted by subject id.
struct ScoreMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> scores;
  std::vector<std::string> probe_subjects;
  std::vector<std::string> gallery_subjects;

  double at(std::size_t p, std::size_t g) const { return scores[p * cols + g]; }
  /// Column of the probe's own subject, if enrolled.
  std::optional<std::size_t> true_column(std::size_t p) const;
};

struct PairScores {
  std::vector<double> genuine;
  std::vector<double> impostor;
  PairSampling sampling = PairSampling::balanced;
  std::uint64_t seed = 0;
};

/// Higher is more similar; Euclidean is the negated distance. Throws ZeroVector, ConstantVector,
/// DimensionMismatch.
double similarity(std::span<const double> a, std::span<const double> b, Metric metric);

/// Fuses the first min(size, n) embeddings (all when size is empty). Representative fusion picks
/// the medoid under 1 - similarity, earliest on ties. Throws EmptyEnrollment.
Template build_template(const std::vector<Vector>& embeddings, Fusion fusion, std::optional<std::size_t> size,
                        Metric metric, std::string subject_id = {});

/// Means of consecutive groups of k; a short tail is dropped unless the record has fewer than k.
std::vector<Vector> fuse_probes(const std::vector<Vector>& embeddings, std::size_t k);

/// Gallery templates must have distinct subject ids. Rows are filled in parallel.
ScoreMatrix score_matrix(const std::vector<Template>& gallery, const std::vector<Probe>& probes, Metric metric);
ScoreMatrix score_matrix_serial(const std::vector<Template>& gallery, const std::vector<Probe>& probes,
                                Metric metric);

/// Throws NoGenuinePairs, or InvalidArgument when there is no impostor cell.
PairScores generate_pairs(const ScoreMatrix& matrix, PairSampling mode, std::uint64_t seed);

}  // namespace ecgbench::biometric
