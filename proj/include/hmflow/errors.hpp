#ifndef HMFLOW_ERRORS_HPP
#define HMFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hmflow {

// Recoverable solver conditions. Callers are expected to catch the specific
// type; everything derives from SolverError so harness code can funnel any of
// them into a run manifest instead of crashing a sweep.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

struct HorizonTooSmall : SolverError {
  using SolverError::SolverError;
};
struct StepUnderflow : SolverError {
  using SolverError::SolverError;
};
struct NotEnoughExtrema : SolverError {
  using SolverError::SolverError;
};
struct UnsupportedDimension : SolverError {
  using SolverError::SolverError;
};
struct BranchMismatch : SolverError {
  using SolverError::SolverError;
};
struct QuadratureDivergence : SolverError {
  using SolverError::SolverError;
};
struct AllBelowTolerance : SolverError {
  using SolverError::SolverError;
};
struct OmegaInconsistent : SolverError {
  using SolverError::SolverError;
};
struct ParameterOutOfRange : SolverError {
  using SolverError::SolverError;
};
struct WindowUncovered : SolverError {
  using SolverError::SolverError;
};
struct InsufficientGrowth : SolverError {
  using SolverError::SolverError;
};
struct SlopeTooSmall : SolverError {
  using SolverError::SolverError;
};
struct ProfileOutOfRange : SolverError {
  using SolverError::SolverError;
};
struct InequalityViolated : SolverError {
  using SolverError::SolverError;
};
struct ResolutionExhausted : SolverError {
  using SolverError::SolverError;
};
struct LinearSolveFailure : SolverError {
  using SolverError::SolverError;
};
struct MaxDepthExceeded : SolverError {
  using SolverError::SolverError;
};

// Internal to the time stepper: one attempted step exceeded its error budget.
struct StepRejected : SolverError {
  double error_estimate;
  explicit StepRejected(double est)
      : SolverError("time step rejected, error estimate " + std::to_string(est)),
        error_estimate(est) {}
};

}  // namespace hmflow

#endif
