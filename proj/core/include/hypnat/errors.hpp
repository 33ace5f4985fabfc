#pragma once

#include <stdexcept>
#include <string>

namespace hypnat {

enum class ErrorCode {
  NonUnitDeterminant,
  CapExceeded,
  RExceedsBall,
  InsufficientData,
  EmptyBall,
  SigmaNotProbability,
  RepresentationIncomplete,
  RuleUndefinedAtAtom,
  ZeroMass,
  DegenerateTwoDeltas,
  MaxIterExceeded,
  EvaluationFailed,
  ElementaryImageSuspected,
  ParseError,
  ValidationError,
  TaskError,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception carrying a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hypnat
