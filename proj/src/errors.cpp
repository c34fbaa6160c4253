#include "grapes/errors.hpp"

namespace grapes {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::EdgeNotFound: return "EdgeNotFound";
    case ErrorCode::LoopCut: return "LoopCut";
    case ErrorCode::TrivialGraph: return "TrivialGraph";
    case ErrorCode::SingletonStem: return "SingletonStem";
    case ErrorCode::NoEssentialVertex: return "NoEssentialVertex";
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::DegreeUndefined: return "DegreeUndefined";
    case ErrorCode::NonzeroResidual: return "NonzeroResidual";
    case ErrorCode::NonIntegerRoot: return "NonIntegerRoot";
    case ErrorCode::InconsistentDegrees: return "InconsistentDegrees";
    case ErrorCode::RoundTripMismatch: return "RoundTripMismatch";
    case ErrorCode::SizeExceeded: return "SizeExceeded";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidField: return "InvalidField";
  }
  return "Error";
}

}  // namespace grapes
