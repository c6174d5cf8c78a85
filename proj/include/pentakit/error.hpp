#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pentakit {

enum class ErrorCode : int {
  Ok = 0,
  ZeroPivot = 1,
  DimensionMismatch = 2,
  SingularCorrection = 3,
  Singular2x2 = 4,
  LayoutError = 5,
  RaggedInput = 6,
  WindowTooLarge = 7,
  StabilityViolation = 8,
  GridMismatch = 9,
  NonPositiveEnergy = 10,
  SaturatedField = 11,
  NonPositiveTime = 12,
  RootBracketFailure = 13,
  EmptyWindow = 14,
  DegenerateInput = 15,
  InvalidArgument = 16,
  Io = 17,
  Config = 18,
  Internal = 99,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Exception carrying a stable error code. `row` and `system` are set for
/// pivot failures (-1 when not applicable).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, long row = -1, long system = -1)
      : std::runtime_error(what), code_(code), row_(row), system_(system) {}

  ErrorCode code() const noexcept { return code_; }
  long row() const noexcept { return row_; }
  long system() const noexcept { return system_; }

 private:
  ErrorCode code_;
  long row_;
  long system_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace pentakit
