#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cvinfer {

enum class ErrorKind {
  // input / data problems
  TooFewObservations,
  ZeroVariance,
  NegativeMeanGroup,
  NonPositiveParameter,
  RawDataRequired,
  InvalidParameter,
  DomainError,
  ParseError,
  // numerical failures
  NoConvergence,
  ProfileExceedsMaximum,
  SingularGradientMatrix,
  NonPositiveInfoDeterminant,
  InconsistentSigns,
  BracketingFailed,
  ZeroPivotalDenominator,
  OutOfBracket,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures of the numerical machinery, as opposed to bad input.
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::TooFewObservations: return "TooFewObservations";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::NegativeMeanGroup: return "NegativeMeanGroup";
    case ErrorKind::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorKind::RawDataRequired: return "RawDataRequired";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ProfileExceedsMaximum: return "ProfileExceedsMaximum";
    case ErrorKind::SingularGradientMatrix: return "SingularGradientMatrix";
    case ErrorKind::NonPositiveInfoDeterminant: return "NonPositiveInfoDeterminant";
    case ErrorKind::InconsistentSigns: return "InconsistentSigns";
    case ErrorKind::BracketingFailed: return "BracketingFailed";
    case ErrorKind::ZeroPivotalDenominator: return "ZeroPivotalDenominator";
    case ErrorKind::OutOfBracket: return "OutOfBracket";
  }
  return "Unknown";
}

inline bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NoConvergence:
    case ErrorKind::ProfileExceedsMaximum:
    case ErrorKind::SingularGradientMatrix:
    case ErrorKind::NonPositiveInfoDeterminant:
    case ErrorKind::InconsistentSigns:
    case ErrorKind::BracketingFailed:
    case ErrorKind::ZeroPivotalDenominator:
    case ErrorKind::OutOfBracket:
      return true;
    default:
      return false;
  }
}

}  // namespace cvinfer
