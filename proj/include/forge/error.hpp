#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

enum class ErrorCode {
  ParseError,
  EmptyMesh,
  NonWatertightInput,
  BooleanFailure,
  DegenerateAxis,
  InvalidRadius,
  EmptySelection,
  SelectionOutOfRange,
  NotDisjoint,
  InsufficientClearance,
  AttachWithoutSurface,
  ValueCountMismatch,
  BadLinkCount,
  EmptyLink,
  DegenerateWorkspace,
  NoMatchingOrientation,
  EmptyWorkspace,
  AllConfigsInfeasible,
  MotorDoesNotFit,
  UnsupportedSurface,
  IKDivergence,
  PointOutsideWorkspace,
  IOFailure,
  InvalidDesign,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 protected:
  struct Verbatim {};
  // Uses `what` as the full message, without the code prefix.
  Error(Verbatim, ErrorCode code, const std::string& what);

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace forge
