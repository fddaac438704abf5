// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/augment.hpp"

#include <cmath>

#include "ecgbench/dsp.hpp"
#include "ecgbench/error.hpp"
#include "ecgbench/random.hpp"

namespace ecgbench::augment {

using segment::BeatSegment;

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::amplitude_scale: return "amplitude_scale";
    case OpKind::gaussian_noise: return "gaussian_noise";
    case OpKind::time_shift: return "time_shift";
    case OpKind::random_crop: return "random_crop";
  }
  return "?";
}

std::optional<OpKind> parse_op_kind(std::string_view name) {
  for (auto k : {OpKind::amplitude_scale, OpKind::gaussian_noise, OpKind::time_shift, OpKind::random_crop}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void validate_op(const AugmentOp& op) {
  switch (op.kind) {
    case OpKind::amplitude_scale:
      require(op.scale_lo > 0.0 && op.scale_lo <= op.scale_hi, ErrorCode::InvalidArgument,
              "amplitude_scale needs 0 < scale_lo <= scale_hi");
      break;
    case OpKind::gaussian_noise:
      require(op.sigma >= 0.0, ErrorCode::InvalidArgument, "gaussian_noise sigma must be >= 0");
      break;
    case OpKind::time_shift:
      require(op.max_shift_s >= 0.0, ErrorCode::InvalidArgument, "time_shift max_shift_s must be >= 0");
      break;
    case OpKind::random_crop:
      require(op.crop_fraction > 0.0 && op.crop_fraction <= 1.0, ErrorCode::InvalidArgument,
              "random_crop fraction must be in (0, 1]");
      break;
  }
}

BeatSegment scale_segment(const BeatSegment& seg, double factor) {
  BeatSegment out = seg;
  for (auto& v : out.samples) v *= factor;
  return out;
}

BeatSegment shift_segment(const BeatSegment& seg, long shift) {
  BeatSegment out = seg;
  const auto n = static_cast<long>(seg.samples.size());
  for (long i = 0; i < n; ++i) {
    const long src = i - shift;
    out.samples[static_cast<std::size_t>(i)] = (src >= 0 && src < n) ? seg.samples[static_cast<std::size_t>(src)] : 0.0;
  }
  return out;
}

BeatSegment apply_augmentation(const BeatSegment& seg, const AugmentOp& op, std::uint64_t seed) {
  validate_op(op);
  Rng rng(seed);
  switch (op.kind) {
    case OpKind::amplitude_scale:
      return scale_segment(seg, op.scale_lo == op.scale_hi ? op.scale_lo : uniform(rng, op.scale_lo, op.scale_hi));
    case OpKind::gaussian_noise: {
      BeatSegment out = seg;
      if (op.sigma == 0.0) return out;
      std::normal_distribution<double> noise(0.0, op.sigma);
      for (auto& v : out.samples) v += noise(rng);
      return out;
    }
    case OpKind::time_shift: {
      const long max_shift = std::lround(op.max_shift_s * seg.fs);
      if (max_shift == 0) return seg;
      return shift_segment(seg, std::uniform_int_distribution<long>(-max_shift, max_shift)(rng));
    }
    case OpKind::random_crop: {
      const std::size_t n = seg.samples.size();
      const auto keep = std::clamp<std::size_t>(
          static_cast<std::size_t>(std::lround(op.crop_fraction * static_cast<double>(n))), 2, n);
      if (keep == n || n < 2) return seg;
      const auto start = std::uniform_int_distribution<std::size_t>(0, n - keep)(rng);
      BeatSegment out = seg;
      out.samples = dsp::resample_fourier(std::span(seg.samples).subspan(start, keep), n);
      return out;
    }
  }
  return seg;
}

namespace {

std::uint64_t copy_seed(std::uint64_t seed, const BeatSegment& s, std::size_t copy) {
  const auto& p = s.provenance;
  return derive_seed(seed, "augment", p.subject_id, p.session_id, p.day_index, p.record_index, s.position,
                     s.peak, copy);
}

void expand_one(const BeatSegment& original, const AugmentSpec& spec, std::uint64_t seed, BeatSegment* out) {
  out[0] = original;
  for (std::size_t c = 1; c <= spec.multiplier; ++c) {
    const std::uint64_t base = copy_seed(seed, original, c);
    BeatSegment s = original;
    for (std::size_t k = 0; k < spec.ops.size(); ++k) {
      s = apply_augmentation(s, spec.ops[k], derive_seed(base, k));
    }
    s.copy = c;
    out[c] = std::move(s);
  }
}

void check_spec(const std::vector<BeatSegment>& segments, const AugmentSpec& spec) {
  require(!segments.empty(), ErrorCode::InvalidArgument, "augmentation needs at least one segment");
  for (const auto& op : spec.ops) validate_op(op);
}

}  // namespace

std::vector<BeatSegment> augment_training_set_serial(const std::vector<BeatSegment>& segments,
                                                     const AugmentSpec& spec, std::uint64_t seed) {
  check_spec(segments, spec);
  const std::size_t stride = spec.multiplier + 1;
  std::vector<BeatSegment> out(segments.size() * stride);
  for (std::size_t i = 0; i < segments.size(); ++i) expand_one(segments[i], spec, seed, &out[i * stride]);
  return out;
}

std::vector<BeatSegment> augment_training_set(const std::vector<BeatSegment>& segments,
                                              const AugmentSpec& spec, std::uint64_t seed) {
  check_spec(segments, spec);
  const std::size_t stride = spec.multiplier + 1;
  std::vector<BeatSegment> out(segments.size() * stride);
  const auto n = static_cast<std::ptrdiff_t>(segments.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    expand_one(segments[u], spec, seed, &out[u * stride]);
  }
  return out;
}

}  // namespace ecgbench::augment
