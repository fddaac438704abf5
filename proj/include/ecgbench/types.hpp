// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace ecgbench {

using Signal = std::vector<double>;

/// Where a recording (and everything cut from it) came from.
struct Provenance {
  std::string subject_id;
  std::string session_id;
  unsigned day_index = 0;
  unsigned record_index = 0;

  auto operator<=>(const Provenance&) const = default;
};

/// Multi-channel sampled ECG in millivolts.
struct Recording {
  Provenance provenance;
  double fs = 0.0;
  std::vector<Signal> channels;

  std::size_t length() const { return channels.empty() ? 0 : channels.front().size(); }
  double duration_s() const { return fs > 0.0 ? static_cast<double>(length()) / fs : 0.0; }
};

// Throws InvalidArgument when channels are ragged, empty, or fs <= 0.
void validate_recording(const Recording& rec);

}  // namespace ecgbench
