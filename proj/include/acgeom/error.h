#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace acgeom {

enum class ErrorCode {
  kInvalidArgument,
  kNonPositiveDeterminant,
  kInvalidDecomposition,
  kNonPositiveScale,
  kSingularNormalMatrix,
  kDegenerateConfiguration,
  kTooFewCorrespondences,
  kTooFewConstraints,
  kCheiralityAmbiguity,
  kPointAtInfinity,
  kNoModelFound,
  kEmptyInput,
  kZeroVector,
  kDegenerateCamera,
  kParseError,
  kDimensionMismatch,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every library failure is reported through this exception type; callers
// branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace acgeom
