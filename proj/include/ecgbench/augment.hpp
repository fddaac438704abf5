// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ecgbench/segment.hpp"

namespace ecgbench::augment {

enum class OpKind { amplitude_scale, gaussian_noise, time_shift, random_crop };

std::string_view to_string(OpKind kind);
std::optional<OpKind> parse_op_kind(std::string_view name);

struct AugmentOp {
  OpKind kind = OpKind::amplitude_scale;
  double scale_lo = 0.9;
  double scale_hi = 1.1;
  double sigma = 0.02;        // gaussian_noise, in the segment's units
  double max_shift_s = 0.02;  // time_shift
  double crop_fraction = 0.9; // random_crop

  bool operator==(const AugmentOp&) const = default;
};

struct AugmentSpec {
  std::vector<AugmentOp> ops;
  std::size_t multiplier = 0;

  bool operator==(const AugmentSpec&) const = default;
};

void validate_op(const AugmentOp& op);

/// Multiplies every sample by `factor`.
segment::BeatSegment scale_segment(const segment::BeatSegment& seg, double factor);
/// Delays by `shift` samples (negative advances); vacated samples are zero.
segment::BeatSegment shift_segment(const segment::BeatSegment& seg, long shift);

segment::BeatSegment apply_augmentation(const segment::BeatSegment& seg, const AugmentOp& op,
                                        std::uint64_t seed);

/// Originals are kept; each is followed by `multiplier` augmented copies whose seeds depend only
/// on (seed, provenance, copy index). Parallel over segments.
std::vector<segment::BeatSegment> augment_training_set(const std::vector<segment::BeatSegment>& segments,
                                                       const AugmentSpec& spec, std::uint64_t seed);

/// Serial reference for augment_training_set.
std::vector<segment::BeatSegment> augment_training_set_serial(
    const std::vector<segment::BeatSegment>& segments, const AugmentSpec& spec, std::uint64_t seed);

}  // namespace ecgbench::augment
