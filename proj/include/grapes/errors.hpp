#pragma once

#include <stdexcept>
#include <string>

namespace grapes {

enum class ErrorCode {
  Syntax,
  Validation,
  EdgeNotFound,
  LoopCut,
  TrivialGraph,
  SingletonStem,
  NoEssentialVertex,
  InvalidShape,
  DegreeUndefined,
  NonzeroResidual,
  NonIntegerRoot,
  InconsistentDegrees,
  RoundTripMismatch,
  SizeExceeded,
  CapExceeded,
  DimensionMismatch,
  ResourceLimit,
  InvalidConfig,
  InvalidField,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace grapes
