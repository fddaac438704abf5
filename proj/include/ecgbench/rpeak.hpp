// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ecgbench::rpeak {

struct PeakList {
  std::vector<std::size_t> indices;  // strictly increasing
  double fs = 0.0;
  std::string detector;
};

/// Pan-Tompkins QRS detector at the caller's sampling rate. Requires fs >= 100 and at least 2 s of
/// signal; throws NoPeaksDetected when fewer than two beats are found.
PeakList pan_tompkins(std::span<const double> x, double fs);

constexpr double refractory_s = 0.2;

}  // namespace ecgbench::rpeak
