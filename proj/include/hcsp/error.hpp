#pragma once

#include <stdexcept>
#include <string>

namespace hcsp {

enum class ErrorKind {
  DimensionMismatch,
  MalformedNumber,
  NonPositiveCost,
  InvalidDimensions,
  IndexOutOfRange,
  InvalidMove,
  TooSmallToShake,
  AllDifferencesZero,
  NonPositiveMean,
  NonPositiveLowerBound,
  LowerBoundViolated,
  InstanceTooLarge,
  InvalidArgument,
  Internal,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MalformedNumber: return "MalformedNumber";
    case ErrorKind::NonPositiveCost: return "NonPositiveCost";
    case ErrorKind::InvalidDimensions: return "InvalidDimensions";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidMove: return "InvalidMove";
    case ErrorKind::TooSmallToShake: return "TooSmallToShake";
    case ErrorKind::AllDifferencesZero: return "AllDifferencesZero";
    case ErrorKind::NonPositiveMean: return "NonPositiveMean";
    case ErrorKind::NonPositiveLowerBound: return "NonPositiveLowerBound";
    case ErrorKind::LowerBoundViolated: return "LowerBoundViolated";
    case ErrorKind::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hcsp
