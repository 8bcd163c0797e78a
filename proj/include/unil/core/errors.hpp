#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace unil {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  OrderTooLarge,
  InvalidPresentation,
  NotAnAction,
  ActionNotAutomorphism,
  NotNormal,
  NotInvertible,
  MissingRoot,
  NotA2Group,
  TwoNotInvertible,
  NotExact,
  NotEquivariant,
  NotNilpotent,
  NotSymmetric,
  VerificationFailed,
  RuleNotApplicable,
  SideConditionFailed,
  DimensionTooSmall,
  Unsupported,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::InvalidPresentation: return "InvalidPresentation";
    case ErrorCode::NotAnAction: return "NotAnAction";
    case ErrorCode::ActionNotAutomorphism: return "ActionNotAutomorphism";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::MissingRoot: return "MissingRoot";
    case ErrorCode::NotA2Group: return "NotA2Group";
    case ErrorCode::TwoNotInvertible: return "TwoNotInvertible";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::NotEquivariant: return "NotEquivariant";
    case ErrorCode::NotNilpotent: return "NotNilpotent";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::RuleNotApplicable: return "RuleNotApplicable";
    case ErrorCode::SideConditionFailed: return "SideConditionFailed";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

/// Every precondition failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace unil
