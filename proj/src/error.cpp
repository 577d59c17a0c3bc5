#include "asc/error.hpp"

namespace asc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::RateMismatch: return "RateMismatch";
    case ErrorCode::DurationTooShort: return "DurationTooShort";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SignalTooShort: return "SignalTooShort";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidKernel: return "InvalidKernel";
    case ErrorCode::KernelTooLarge: return "KernelTooLarge";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::AlreadyNormalized: return "AlreadyNormalized";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::EmptySplit: return "EmptySplit";
    case ErrorCode::CorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::WeightLengthMismatch: return "WeightLengthMismatch";
    case ErrorCode::WeightsNotNormalized: return "WeightsNotNormalized";
    case ErrorCode::NonFiniteScore: return "NonFiniteScore";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ClipSetMismatch: return "ClipSetMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_numeric_failure(ErrorCode code) noexcept {
  return code == ErrorCode::NonFiniteLoss || code == ErrorCode::NonFiniteScore;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace asc
