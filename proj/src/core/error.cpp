#include "pentakit/error.hpp"

namespace pentakit {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::ZeroPivot: return "ZeroPivot";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularCorrection: return "SingularCorrection";
    case ErrorCode::Singular2x2: return "Singular2x2";
    case ErrorCode::LayoutError: return "LayoutError";
    case ErrorCode::RaggedInput: return "RaggedInput";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonPositiveEnergy: return "NonPositiveEnergy";
    case ErrorCode::SaturatedField: return "SaturatedField";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::RootBracketFailure: return "RootBracketFailure";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace pentakit
