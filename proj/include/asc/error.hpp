#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asc {

enum class ErrorCode {
  Io,
  UnsupportedFormat,
  RateMismatch,
  DurationTooShort,
  UnknownLabel,
  DuplicateEntry,
  ParseError,
  SignalTooShort,
  InvalidRange,
  InvalidConfig,
  InvalidKernel,
  KernelTooLarge,
  ShapeMismatch,
  AlreadyNormalized,
  NonFiniteLoss,
  EmptySplit,
  CorruptCheckpoint,
  VersionMismatch,
  WeightLengthMismatch,
  WeightsNotNormalized,
  NonFiniteScore,
  IndexOutOfRange,
  ClipSetMismatch,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for failures caused by NaN/Inf arising in computation rather than by bad input.
bool is_numeric_failure(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace asc
