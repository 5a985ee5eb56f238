#include "forge/error.hpp"

namespace forge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyMesh: return "EmptyMesh";
    case ErrorCode::NonWatertightInput: return "NonWatertightInput";
    case ErrorCode::BooleanFailure: return "BooleanFailure";
    case ErrorCode::DegenerateAxis: return "DegenerateAxis";
    case ErrorCode::InvalidRadius: return "InvalidRadius";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::SelectionOutOfRange: return "SelectionOutOfRange";
    case ErrorCode::NotDisjoint: return "NotDisjoint";
    case ErrorCode::InsufficientClearance: return "InsufficientClearance";
    case ErrorCode::AttachWithoutSurface: return "AttachWithoutSurface";
    case ErrorCode::ValueCountMismatch: return "ValueCountMismatch";
    case ErrorCode::BadLinkCount: return "BadLinkCount";
    case ErrorCode::EmptyLink: return "EmptyLink";
    case ErrorCode::DegenerateWorkspace: return "DegenerateWorkspace";
    case ErrorCode::NoMatchingOrientation: return "NoMatchingOrientation";
    case ErrorCode::EmptyWorkspace: return "EmptyWorkspace";
    case ErrorCode::AllConfigsInfeasible: return "AllConfigsInfeasible";
    case ErrorCode::MotorDoesNotFit: return "MotorDoesNotFit";
    case ErrorCode::UnsupportedSurface: return "UnsupportedSurface";
    case ErrorCode::IKDivergence: return "IKDivergence";
    case ErrorCode::PointOutsideWorkspace: return "PointOutsideWorkspace";
    case ErrorCode::IOFailure: return "IOFailure";
    case ErrorCode::InvalidDesign: return "InvalidDesign";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error::Error(Verbatim, ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace forge
