// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ecgbench/rpeak.hpp"
#include "ecgbench/types.hpp"

namespace ecgbench::segment {

/// Fixed-length window around one R peak.
struct BeatSegment {
  Signal samples;
  std::size_t peak = 0;      // R index in the source record
  std::size_t start = 0;     // first sample in the source record
  std::size_t position = 0;  // order among the kept beats of the record
  std::size_t copy = 0;      // 0 for an original, k for the k-th augmented copy
  double fs = 0.0;
  Provenance provenance;

  std::size_t end() const { return start + samples.size(); }
};

struct WindowSegment {
  Signal samples;
  std::size_t start = 0;
  std::size_t position = 0;
  double fs = 0.0;
  Provenance provenance;

  std::size_t end() const { return start + samples.size(); }
};

/// Index of max |x| within +-half_window_s of `peak`; ties go to the earliest index.
std::size_t align_peak(std::span<const double> x, std::size_t peak, double fs,
                       double half_window_s = 0.05);

/// One segment per peak whose window fits in the signal; beats that would need padding are dropped.
std::vector<BeatSegment> segment_beats(std::span<const double> x, double fs,
                                       std::span<const std::size_t> peaks, double pre_s,
                                       double post_s, bool align, const Provenance& provenance = {});

/// Throws WindowLongerThanSignal.
std::vector<WindowSegment> segment_blind(std::span<const double> x, double fs, double window_s,
                                         double stride_s, const Provenance& provenance = {});

/// Blind windows carried as beat-shaped segments (peak = window start) so the embedding and
/// matching stages can treat both modes alike.
BeatSegment as_beat(const WindowSegment& w);

}  // namespace ecgbench::segment
