#pragma once

#include <stdexcept>
#include <string>

namespace vwidth {

/// Failure categories shared by every module. The CLI maps them to exit codes.
enum class ErrorCode {
  NonPrimeP,
  ReducibleModulus,
  DivisionByZero,
  SpecMismatch,
  NotFinite,
  ZeroElement,
  NotAnSthPower,
  ParseError,
  NotTriangular,
  SingularDiagonal,
  SizeMismatch,
  BadIndex,
  BadSize,
  GuardExceeded,
  SyntaxError,
  PowerWordInput,
  MissingAssignment,
  InvalidWord,
  ContextMismatch,
  NotInVerbal,
  NotCoprimeExponent,
  NoRoot,
  NotLevel,
  SearchExhausted,
  FieldTooSmall,
};

inline const char *to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::NonPrimeP: return "NonPrimeP";
  case ErrorCode::ReducibleModulus: return "ReducibleModulus";
  case ErrorCode::DivisionByZero: return "DivisionByZero";
  case ErrorCode::SpecMismatch: return "SpecMismatch";
  case ErrorCode::NotFinite: return "NotFinite";
  case ErrorCode::ZeroElement: return "ZeroElement";
  case ErrorCode::NotAnSthPower: return "NotAnSthPower";
  case ErrorCode::ParseError: return "ParseError";
  case ErrorCode::NotTriangular: return "NotTriangular";
  case ErrorCode::SingularDiagonal: return "SingularDiagonal";
  case ErrorCode::SizeMismatch: return "SizeMismatch";
  case ErrorCode::BadIndex: return "BadIndex";
  case ErrorCode::BadSize: return "BadSize";
  case ErrorCode::GuardExceeded: return "GuardExceeded";
  case ErrorCode::SyntaxError: return "SyntaxError";
  case ErrorCode::PowerWordInput: return "PowerWordInput";
  case ErrorCode::MissingAssignment: return "MissingAssignment";
  case ErrorCode::InvalidWord: return "InvalidWord";
  case ErrorCode::ContextMismatch: return "ContextMismatch";
  case ErrorCode::NotInVerbal: return "NotInVerbal";
  case ErrorCode::NotCoprimeExponent: return "NotCoprimeExponent";
  case ErrorCode::NoRoot: return "NoRoot";
  case ErrorCode::NotLevel: return "NotLevel";
  case ErrorCode::SearchExhausted: return "SearchExhausted";
  case ErrorCode::FieldTooSmall: return "FieldTooSmall";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Internal invariant violation. Never expected on valid input.
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

inline void ensure(bool condition, const char *what) {
  if (!condition)
    throw InvariantViolation(what);
}

} // namespace vwidth
