// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/rpeak.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "ecgbench/dsp.hpp"
#include "ecgbench/error.hpp"

namespace ecgbench::rpeak {
namespace {

std::vector<double> integrate(std::span<const double> x, std::size_t window) {
  // Centred moving-window integration, so the integrated bump lines up with the QRS.
  std::vector<double> prefix(x.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> out(x.size());
  const std::size_t half = window / 2;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const std::size_t lo = n >= half ? n - half : 0;
    const std::size_t hi = std::min(x.size(), lo + window);
    out[n] = (prefix[hi] - prefix[lo]) / static_cast<double>(window);
  }
  return out;
}

// Samples that dominate their +-half neighbourhood (earliest wins on a plateau).
std::vector<std::size_t> candidate_peaks(const std::vector<double>& y, std::size_t half) {
  std::vector<std::size_t> out;
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y[i] > 0.0)) continue;
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    bool is_peak = true;
    for (std::size_t j = lo; j < i && is_peak; ++j) is_peak = y[j] < y[i];
    for (std::size_t j = i + 1; j <= hi && is_peak; ++j) is_peak = y[j] <= y[i];
    if (is_peak) out.push_back(i);
  }
  return out;
}

}  // namespace

PeakList pan_tompkins(std::span<const double> x, double fs) {
  require(fs >= 100.0, ErrorCode::InvalidArgument, "pan_tompkins needs fs >= 100 Hz");
  require(static_cast<double>(x.size()) >= 2.0 * fs, ErrorCode::InvalidArgument,
          "pan_tompkins needs at least 2 s of signal");

  const auto band = dsp::filtfilt(dsp::design_butterworth_bandpass(2, {5.0, 15.0}, fs), x);

  const std::size_t n = band.size();
  std::vector<double> energy(n);
  auto at = [&](std::size_t i, std::size_t back) { return band[i >= back ? i - back : 0]; };
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (2.0 * band[i] + at(i, 1) - at(i, 3) - 2.0 * at(i, 4)) / 8.0;
    energy[i] = d * d;
  }
  const auto window = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.150 * fs)));
  const auto mwi = integrate(energy, window);

  const auto refractory = static_cast<std::size_t>(std::lround(refractory_s * fs));
  const auto candidates = candidate_peaks(mwi, refractory / 2);

  const auto warmup = std::min(n, static_cast<std::size_t>(std::lround(2.0 * fs)));
  double spki = 0.25 * *std::max_element(mwi.begin(), mwi.begin() + static_cast<std::ptrdiff_t>(warmup));
  double npki = 0.5 * std::accumulate(mwi.begin(), mwi.begin() + static_cast<std::ptrdiff_t>(warmup), 0.0) /
                static_cast<double>(warmup);
  auto threshold = [&] { return npki + 0.25 * (spki - npki); };

  std::vector<std::size_t> qrs;
  std::deque<double> rr;
  std::vector<std::size_t> noise_since_last;
  auto accept = [&](std::size_t idx) {
    if (!qrs.empty()) {
      rr.push_back(static_cast<double>(idx - qrs.back()));
      if (rr.size() > 8) rr.pop_front();
    }
    qrs.push_back(idx);
    noise_since_last.clear();
  };

  for (std::size_t c : candidates) {
    const double v = mwi[c];
    if (!qrs.empty() && !rr.empty()) {
      const double rr_avg = std::accumulate(rr.begin(), rr.end(), 0.0) / static_cast<double>(rr.size());
      if (static_cast<double>(c - qrs.back()) > 1.66 * rr_avg) {
        // Search back for a missed beat using the halved threshold.
        const double thr2 = 0.5 * threshold();
        std::size_t best = 0;
        bool found = false;
        for (std::size_t cand : noise_since_last) {
          if (cand - qrs.back() < refractory || mwi[cand] <= thr2) continue;
          if (!found || mwi[cand] > mwi[best]) {
            best = cand;
            found = true;
          }
        }
        if (found) {
          spki = 0.25 * mwi[best] + 0.75 * spki;
          accept(best);
        }
      }
    }
    if (!qrs.empty() && c - qrs.back() < refractory) {
      npki = 0.125 * v + 0.875 * npki;
      continue;
    }
    if (v > threshold()) {
      spki = 0.125 * v + 0.875 * spki;
      accept(c);
    } else {
      npki = 0.125 * v + 0.875 * npki;
      noise_since_last.push_back(c);
    }
  }

  // Move each detection onto the local maximum of the input within +-50 ms.
  const auto search = static_cast<std::size_t>(std::lround(0.050 * fs));
  PeakList out;
  out.fs = fs;
  out.detector = "pan_tompkins";
  for (std::size_t q : qrs) {
    const std::size_t lo = q >= search ? q - search : 0;
    const std::size_t hi = std::min(n - 1, q + search);
    std::size_t best = lo;
    for (std::size_t i = lo + 1; i <= hi; ++i) {
      if (x[i] > x[best]) best = i;
    }
    if (!out.indices.empty() && best - out.indices.back() < refractory) {
      if (x[best] > x[out.indices.back()]) out.indices.back() = best;
      continue;
    }
    if (out.indices.empty() || best > out.indices.back()) out.indices.push_back(best);
  }
  require(out.indices.size() >= 2, ErrorCode::NoPeaksDetected,
          "found " + std::to_string(out.indices.size()) + " peaks");
  return out;
}

}  // namespace ecgbench::rpeak
