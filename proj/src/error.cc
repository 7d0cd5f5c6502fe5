#include "acgeom/error.h"

namespace acgeom {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPositiveDeterminant: return "NonPositiveDeterminant";
    case ErrorCode::kInvalidDecomposition: return "InvalidDecomposition";
    case ErrorCode::kNonPositiveScale: return "NonPositiveScale";
    case ErrorCode::kSingularNormalMatrix: return "SingularNormalMatrix";
    case ErrorCode::kDegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::kTooFewCorrespondences: return "TooFewCorrespondences";
    case ErrorCode::kTooFewConstraints: return "TooFewConstraints";
    case ErrorCode::kCheiralityAmbiguity: return "CheiralityAmbiguity";
    case ErrorCode::kPointAtInfinity: return "PointAtInfinity";
    case ErrorCode::kNoModelFound: return "NoModelFound";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kDegenerateCamera: return "DegenerateCamera";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace acgeom
