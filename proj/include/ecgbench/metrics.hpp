// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "ecgbench/biometric.hpp"

namespace ecgbench::metrics {

using biometric::PairScores;
using biometric::ScoreMatrix;

/// Candidate thresholds (distinct scores ascending, then +inf) with FAR(t) = P(impostor >= t) and
/// FRR(t) = P(genuine < t).
struct RocCurve {
  std::vector<double> thresholds;
  std::vector<double> far;
  std::vector<double> frr;
};

RocCurve roc_curve(const PairScores& pairs);

/// Exact crossing if one exists, else the midpoint of FAR and FRR where |FAR - FRR| is smallest
/// (lowest threshold on ties). Throws EmptySide.
double eer(const PairScores& pairs);

/// Mann-Whitney estimate with ties counted as one half. auc(G, I) + auc(I, G) == 1 exactly.
double auc(const PairScores& pairs);

/// |mu_G - mu_I| / sqrt((var_G + var_I) / 2) with sample variances. Throws TooFewScores,
/// ZeroPooledVariance.
double dprime(const PairScores& pairs);

struct TarResult {
  double tar = 0.0;
  double threshold = 0.0;
  bool coarse = false;  // fewer impostors than 1 / far_target
};

TarResult tar_at_far(const PairScores& pairs, double far_target = 0.001);

/// Fraction of probes ranked within k, counting ties against the probe. Throws
/// TrueSubjectMissing.
double rank_accuracy(const ScoreMatrix& matrix, std::size_t k);

}  // namespace ecgbench::metrics
