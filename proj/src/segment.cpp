// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/segment.hpp"

#include <cmath>

#include "ecgbench/error.hpp"

namespace ecgbench::segment {

std::size_t align_peak(std::span<const double> x, std::size_t peak, double fs, double half_window_s) {
  require(peak < x.size(), ErrorCode::InvalidArgument, "peak index outside signal");
  const auto half = static_cast<std::size_t>(std::lround(half_window_s * fs));
  const std::size_t lo = peak >= half ? peak - half : 0;
  const std::size_t hi = std::min(x.size() - 1, peak + half);
  std::size_t best = lo;
  for (std::size_t i = lo + 1; i <= hi; ++i) {
    if (std::abs(x[i]) > std::abs(x[best])) best = i;
  }
  return best;
}

std::vector<BeatSegment> segment_beats(std::span<const double> x, double fs,
                                       std::span<const std::size_t> peaks, double pre_s,
                                       double post_s, bool align, const Provenance& provenance) {
  require(pre_s >= 0.0 && post_s >= 0.0 && pre_s + post_s > 0.0, ErrorCode::InvalidArgument,
          "pre_s and post_s must be non-negative with a positive sum");
  require(fs > 0.0, ErrorCode::InvalidArgument, "sampling rate must be positive");
  const auto pre = static_cast<std::size_t>(std::lround(pre_s * fs));
  const auto length = static_cast<std::size_t>(std::lround((pre_s + post_s) * fs));

  std::vector<BeatSegment> out;
  for (std::size_t p : peaks) {
    if (p >= x.size()) continue;
    const std::size_t r = align ? align_peak(x, p, fs) : p;
    if (r < pre || r - pre + length > x.size()) continue;
    BeatSegment seg;
    seg.start = r - pre;
    seg.peak = r;
    seg.samples.assign(x.begin() + static_cast<std::ptrdiff_t>(seg.start),
                       x.begin() + static_cast<std::ptrdiff_t>(seg.start + length));
    seg.position = out.size();
    seg.fs = fs;
    seg.provenance = provenance;
    out.push_back(std::move(seg));
  }
  return out;
}

std::vector<WindowSegment> segment_blind(std::span<const double> x, double fs, double window_s,
                                         double stride_s, const Provenance& provenance) {
  require(fs > 0.0, ErrorCode::InvalidArgument, "sampling rate must be positive");
  require(stride_s > 0.0 && stride_s <= window_s, ErrorCode::InvalidArgument,
          "blind segmentation needs 0 < stride_s <= window_s");
  const auto width = static_cast<std::size_t>(std::lround(window_s * fs));
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(stride_s * fs)));
  require(width >= 1 && width <= x.size(), ErrorCode::WindowLongerThanSignal,
          "window of " + std::to_string(width) + " samples on a signal of " + std::to_string(x.size()));

  std::vector<WindowSegment> out;
  for (std::size_t start = 0; start + width <= x.size(); start += stride) {
    WindowSegment w;
    w.start = start;
    w.samples.assign(x.begin() + static_cast<std::ptrdiff_t>(start),
                     x.begin() + static_cast<std::ptrdiff_t>(start + width));
    w.position = out.size();
    w.fs = fs;
    w.provenance = provenance;
    out.push_back(std::move(w));
  }
  return out;
}

BeatSegment as_beat(const WindowSegment& w) {
  BeatSegment b;
  b.samples = w.samples;
  b.peak = w.start;
  b.start = w.start;
  b.position = w.position;
  b.fs = w.fs;
  b.provenance = w.provenance;
  return b;
}

}  // namespace ecgbench::segment
