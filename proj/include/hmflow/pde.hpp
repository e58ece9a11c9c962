#ifndef HMFLOW_PDE_HPP
#define HMFLOW_PDE_HPP

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hmflow/model.hpp"

namespace hmflow {

enum class Scheme { IMEX1, IMEX2 };

std::string to_string(Scheme s);

// Time stepping: the linear radial operator (including the origin-linearized
// reaction -(m-1) theta / r^2) is implicit via one tridiagonal solve per
// stage; the bounded remainder (m-1)(theta - sin(2 theta)/2)/r^2 is explicit.
// IMEX1 is backward Euler (order-preserving / monotone), IMEX2 the one-step
// implicit-midpoint variant (2nd order).  Step control is Richardson step
// doubling against err_tol.
struct TimeStepperConfig {
  Scheme scheme = Scheme::IMEX2;
  double dt_init = 1e-8;
  double dt_safety = 0.9;
  double cfl_sigma = 0.5;   // dt <= sigma * min r_i^2 / ((m-1) g^{-1}) over |theta|>0.1
  double err_tol = 1e-7;    // absolute, on theta per step
  double dt_min = 1e-15;
  double dt_max = 0.1;

  int base_intervals = 512;
  int base_depth = 0;
  int p_min = 16;      // grid points required across the gradient scale 1/m(t)
  int max_depth = 30;

  // Optional manufactured-solution forcing, added to theta_t.  Not serialized.
  std::function<double(double r, double t)> forcing;
};

struct RegridPolicy {
  int p_min = 16;
  int max_depth = 30;
};

struct StopRule {
  double t_end = std::numeric_limits<double>::infinity();
  double m_stop = 0.0;  // 0 selects the default 1e3 / R
  double eta_steady = 1e-6;
  std::vector<double> snapshot_times;  // extra snapshot instants, hit exactly
};

enum class StopReason {
  TimeEnd,
  Steady,
  BlowupThreshold,
  ResolutionExhausted,
  Degenerate
};

std::string to_string(StopReason r);

struct MonitorSample {
  double t = 0, dt = 0;
  double grad_sup = 0;       // m(t) = sup_r |theta_r|
  double slope_origin = 0;   // theta_r(0, t)
  double energy = 0;
  double density_sup = 0;    // sup_r e(r, t)
  double theta_t_sup = 0;    // sup |increment quotient|
  double cum_dissipation = 0;
  int depth = 0;
};

struct Snapshot {
  FlowState state;
  double cum_dissipation = 0;
};

struct FlowTrace {
  FlowParams params;
  TimeStepperConfig config;
  StopRule stop;
  StopReason stop_reason = StopReason::TimeEnd;
  double initial_energy = 0;
  std::vector<Snapshot> snapshots;
  std::vector<MonitorSample> monitors;

  const FlowState& last_state() const { return snapshots.back().state; }
  double last_time() const { return snapshots.back().state.t; }
};

// Initial data per params.initial_data on the given grid.  theta(0) = 0 and
// theta(R) = b exactly.
FlowState initial_state(const FlowParams& params, const RadialGrid& grid);

// One attempted IMEX step of size dt.  Throws StepRejected when the step
// doubling estimate exceeds config.err_tol; boundary values are re-imposed
// exactly on the result.
FlowState step(const FlowState& state, double dt, const FlowParams& params,
               const TimeStepperConfig& config);

// Dyadic refinement toward the origin when fewer than policy.p_min nodes span
// the scale 1/grad_sup.  Identity when there is no trigger; throws
// MaxDepthExceeded at the refinement cap.
FlowState regrid(const FlowState& state, const RegridPolicy& policy, double grad_sup,
                 const FlowParams& params);

FlowTrace run_flow(const FlowParams& params, const TimeStepperConfig& config,
                   const StopRule& stop);

}  // namespace hmflow

#endif
