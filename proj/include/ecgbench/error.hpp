// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecgbench {

enum class ErrorCode {
  InvalidArgument,
  // configuration
  UnknownField,
  InconsistentSettings,
  EmptySeeds,
  // ingest
  SchemaError,
  DuplicateRecordKey,
  MalformedHeaderLine,
  UnsupportedFormat,
  TruncatedData,
  ZeroGain,
  IoError,
  FormatMismatch,
  // dsp
  BandOutOfRange,
  SignalTooShort,
  ZeroVariance,
  // rpeak / segment / represent
  NoPeaksDetected,
  WindowLongerThanSignal,
  WindowTooLong,
  ConstantSignal,
  // embed
  SingleClass,
  DimensionMismatch,
  // biometric / metrics
  EmptyEnrollment,
  ZeroVector,
  ConstantVector,
  NoGenuinePairs,
  EmptySide,
  ZeroPooledVariance,
  TooFewScores,
  TrueSubjectMissing,
  // regimes
  RegimeUnsatisfiable,
  TooFewSubjects,
  OverlappingRanges,
  RangeOutOfBounds,
  KeyMismatch,
  LeakageDetected,
  // results files
  SchemaVersionMismatch,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace ecgbench
