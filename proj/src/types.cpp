#include "coarse/types.hpp"

namespace coarse {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kUnknownVertex: return "UnknownVertex";
    case ErrorCode::kDuplicatePoint: return "DuplicatePoint";
    case ErrorCode::kDiscretenessViolation: return "DiscretenessViolation";
    case ErrorCode::kDomainMismatch: return "DomainMismatch";
    case ErrorCode::kEmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorCode::kNotInjective: return "NotInjective";
    case ErrorCode::kScaleTooSmall: return "ScaleTooSmall";
    case ErrorCode::kNotPositive: return "NotPositive";
    case ErrorCode::kMarginTooLarge: return "MarginTooLarge";
    case ErrorCode::kGenerationFailed: return "GenerationFailedAfterRetries";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kOverflow: return "Overflow";
  }
  return "Error";
}

}  // namespace coarse
