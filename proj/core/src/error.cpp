#include "acyl/error.hpp"

namespace acyl {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kConfigError: return "CONFIG_ERROR";
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kNonManifoldEdge: return "NON_MANIFOLD_EDGE";
    case ErrorCode::kNonOrientable: return "NON_ORIENTABLE";
    case ErrorCode::kDegenerateTriangle: return "DEGENERATE_TRIANGLE";
    case ErrorCode::kDegenerateLattice: return "DEGENERATE_LATTICE";
    case ErrorCode::kConvergenceFailure: return "CONVERGENCE_FAILURE";
    case ErrorCode::kWindowExceedsCutoff: return "WINDOW_EXCEEDS_CUTOFF";
    case ErrorCode::kCriticalRate: return "CRITICAL_RATE";
    case ErrorCode::kNotOrdered: return "NOT_ORDERED";
    case ErrorCode::kNonNegativeRate: return "NON_NEGATIVE_RATE";
    case ErrorCode::kOddKernelDimension: return "ODD_KERNEL_DIMENSION";
    case ErrorCode::kNotInKernel: return "NOT_IN_KERNEL";
    case ErrorCode::kCriticalWeight: return "CRITICAL_WEIGHT";
    case ErrorCode::kInsufficientTail: return "INSUFFICIENT_TAIL";
    case ErrorCode::kIllConditionedMatching: return "ILL_CONDITIONED_MATCHING";
    case ErrorCode::kPerturbationTooLarge: return "PERTURBATION_TOO_LARGE";
  }
  return "UNKNOWN";
}

}  // namespace acyl
