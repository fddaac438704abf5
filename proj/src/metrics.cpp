// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "ecgbench/error.hpp"

namespace ecgbench::metrics {
namespace {

struct Sweep {
  std::vector<double> genuine;   // sorted
  std::vector<double> impostor;  // sorted
  std::vector<double> thresholds;

  // Counts at threshold t: impostors accepted (>= t) and genuine rejected (< t).
  std::int64_t false_accepts(double t) const {
    return static_cast<std::int64_t>(impostor.end() - std::lower_bound(impostor.begin(), impostor.end(), t));
  }
  std::int64_t false_rejects(double t) const {
    return static_cast<std::int64_t>(std::lower_bound(genuine.begin(), genuine.end(), t) - genuine.begin());
  }
  std::int64_t n_genuine() const { return static_cast<std::int64_t>(genuine.size()); }
  std::int64_t n_impostor() const { return static_cast<std::int64_t>(impostor.size()); }
};

Sweep make_sweep(const PairScores& pairs) {
  require(!pairs.genuine.empty() && !pairs.impostor.empty(), ErrorCode::EmptySide,
          "need genuine and impostor scores");
  Sweep s{pairs.genuine, pairs.impostor, {}};
  std::sort(s.genuine.begin(), s.genuine.end());
  std::sort(s.impostor.begin(), s.impostor.end());
  std::merge(s.genuine.begin(), s.genuine.end(), s.impostor.begin(), s.impostor.end(),
             std::back_inserter(s.thresholds));
  s.thresholds.erase(std::unique(s.thresholds.begin(), s.thresholds.end()), s.thresholds.end());
  s.thresholds.push_back(std::numeric_limits<double>::infinity());
  return s;
}

}  // namespace

RocCurve roc_curve(const PairScores& pairs) {
  const Sweep s = make_sweep(pairs);
  RocCurve roc;
  roc.thresholds = s.thresholds;
  for (double t : s.thresholds) {
    roc.far.push_back(static_cast<double>(s.false_accepts(t)) / static_cast<double>(s.n_impostor()));
    roc.frr.push_back(static_cast<double>(s.false_rejects(t)) / static_cast<double>(s.n_genuine()));
  }
  return roc;
}

double eer(const PairScores& pairs) {
  const Sweep s = make_sweep(pairs);
  const std::int64_t ng = s.n_genuine();
  const std::int64_t ni = s.n_impostor();
  // FAR = fa / ni and FRR = fr / ng, compared on the common denominator ni * ng.
  std::int64_t best_gap = std::numeric_limits<std::int64_t>::max();
  std::int64_t best_fa = 0, best_fr = 0;
  for (double t : s.thresholds) {
    const std::int64_t fa = s.false_accepts(t);
    const std::int64_t fr = s.false_rejects(t);
    const std::int64_t gap = std::abs(fa * ng - fr * ni);
    if (gap == 0) return static_cast<double>(fa) / static_cast<double>(ni);
    if (gap < best_gap) {
      best_gap = gap;
      best_fa = fa;
      best_fr = fr;
    }
  }
  return static_cast<double>(best_fa * ng + best_fr * ni) / static_cast<double>(2 * ni * ng);
}

double auc(const PairScores& pairs) {
  require(!pairs.genuine.empty() && !pairs.impostor.empty(), ErrorCode::EmptySide, "need genuine and impostor scores");
  std::vector<double> imp = pairs.impostor;
  std::sort(imp.begin(), imp.end());
  // Twice the Mann-Whitney count, so ties stay integral.
  std::int64_t twice = 0;
  for (double g : pairs.genuine) {
    const auto lo = std::lower_bound(imp.begin(), imp.end(), g);
    const auto hi = std::upper_bound(lo, imp.end(), g);
    twice += 2 * (lo - imp.begin()) + (hi - lo);
  }
  const auto total = static_cast<std::int64_t>(2 * pairs.genuine.size() * pairs.impostor.size());
  // Evaluate the smaller half directly so that swapping the sides yields the exact complement.
  if (2 * twice <= total) return static_cast<double>(twice) / static_cast<double>(total);
  return 1.0 - static_cast<double>(total - twice) / static_cast<double>(total);
}

double dprime(const PairScores& pairs) {
  require(pairs.genuine.size() >= 2 && pairs.impostor.size() >= 2, ErrorCode::TooFewScores,
          "d' needs at least two scores per side");
  auto moments = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, ss / (n - 1.0)};
  };
  const auto [mg, vg] = moments(pairs.genuine);
  const auto [mi, vi] = moments(pairs.impostor);
  const double pooled = 0.5 * (vg + vi);
  require(pooled > 0.0, ErrorCode::ZeroPooledVariance, "both score sets are constant");
  return std::abs(mg - mi) / std::sqrt(pooled);
}

TarResult tar_at_far(const PairScores& pairs, double far_target) {
  require(far_target > 0.0 && far_target <= 1.0, ErrorCode::InvalidArgument, "far target must be in (0, 1]");
  const Sweep s = make_sweep(pairs);
  TarResult r;
  r.coarse = static_cast<double>(s.n_impostor()) * far_target < 1.0;
  for (double t : s.thresholds) {
    if (static_cast<double>(s.false_accepts(t)) / static_cast<double>(s.n_impostor()) <= far_target) {
      r.threshold = t;
      r.tar = static_cast<double>(s.n_genuine() - s.false_rejects(t)) / static_cast<double>(s.n_genuine());
      return r;
    }
  }
  return r;  // unreachable: +inf always has FAR 0
}

double rank_accuracy(const ScoreMatrix& matrix, std::size_t k) {
  require(k >= 1, ErrorCode::InvalidArgument, "rank k must be >= 1");
  require(matrix.rows > 0, ErrorCode::InvalidArgument, "empty score matrix");
  std::size_t hits = 0;
  for (std::size_t p = 0; p < matrix.rows; ++p) {
    const auto own = matrix.true_column(p);
    require(own.has_value(), ErrorCode::TrueSubjectMissing,
            "probe subject '" + matrix.probe_subjects[p] + "' is not in the gallery");
    const double target = matrix.at(p, *own);
    std::size_t rank = 1;
    for (std::size_t g = 0; g < matrix.cols; ++g) {
      if (g != *own && matrix.at(p, g) >= target) ++rank;
    }
    hits += rank <= k;
  }
  return static_cast<double>(hits) / static_cast<double>(matrix.rows);
}

}  // namespace ecgbench::metrics
