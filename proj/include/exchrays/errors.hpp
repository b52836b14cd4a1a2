#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace exchrays {

enum class ErrorKind {
  NegativeMass,
  NotNormalized,
  LengthMismatch,
  Overflow,
  OrderOutOfRange,
  DegenerateMarginal,
  IndexOutOfRange,
  NonIntegerMean,
  MeanMismatch,
  InfeasibleMoment,
  EmptyRaySet,
  InadmissibleCorrelation,
  InvalidArgument,
  ParseError,
  Internal,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::OrderOutOfRange: return "OrderOutOfRange";
    case ErrorKind::DegenerateMarginal: return "DegenerateMarginal";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonIntegerMean: return "NonIntegerMean";
    case ErrorKind::MeanMismatch: return "MeanMismatch";
    case ErrorKind::InfeasibleMoment: return "InfeasibleMoment";
    case ErrorKind::EmptyRaySet: return "EmptyRaySet";
    case ErrorKind::InadmissibleCorrelation: return "InadmissibleCorrelation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace exchrays
