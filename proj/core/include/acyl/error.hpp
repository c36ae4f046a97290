#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace acyl {

enum class ErrorCode {
  kInvalidArgument,
  kConfigError,
  kParseError,
  kNonManifoldEdge,
  kNonOrientable,
  kDegenerateTriangle,
  kDegenerateLattice,
  kConvergenceFailure,
  kWindowExceedsCutoff,
  kCriticalRate,
  kNotOrdered,
  kNonNegativeRate,
  kOddKernelDimension,
  kNotInKernel,
  kCriticalWeight,
  kInsufficientTail,
  kIllConditionedMatching,
  kPerturbationTooLarge,
};

/// Stable upper-snake name used in "ERR <CODE>: ..." lines.
std::string_view code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace acyl
