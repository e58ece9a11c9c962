#ifndef HMFLOW_DIAGNOSTICS_HPP
#define HMFLOW_DIAGNOSTICS_HPP

#include <functional>
#include <string>
#include <vector>

#include "hmflow/pde.hpp"

namespace hmflow {

// Tolerance-filtered sign changes: samples with |v| <= eta_rel * max|v| are
// transparent, each opposite-sign adjacency of the remaining sequence counts
// once.  Shared by zero_number and steady::crossing_count.
int filtered_sign_changes(const std::vector<double>& v, double eta_rel,
                          bool* all_transparent = nullptr);

// Zero number of a grid function; counts sign changes only (floating point
// samples cannot see analytic multiplicity - stated deviation).  Throws
// AllBelowTolerance when every sample is transparent.
int zero_number(const std::vector<double>& v, double eta_rel = 1e-7);

struct ZeroCountSeries {
  std::vector<double> times;
  std::vector<int> counts;
  std::vector<unsigned char> all_transparent;  // per time
  double eta = 1e-7;
  std::vector<double> drop_events;  // times where the count strictly decreased
  bool non_increasing = true;       // after tolerance filtering
};

// Intersection number Z(theta(.,t) - reference) per snapshot.  The reference
// is evaluated on each snapshot's grid.
ZeroCountSeries intersection_series(const FlowTrace& trace,
                                    const std::function<double(double)>& reference,
                                    double eta_rel = 1e-7);

// Intersection numbers of two runs sharing boundary values; snapshots are
// paired by index (use forced snapshot times so the instants agree).
ZeroCountSeries intersection_series_pair(const FlowTrace& a, const FlowTrace& b,
                                         double eta_rel = 1e-7);

enum class TailDirection { Increasing, Decreasing, Constant, None };

struct OriginSlopeSeries {
  std::vector<double> times;
  std::vector<double> slopes;      // theta_r(0, t)
  std::size_t tail_start = 0;      // largest monotone suffix
  TailDirection tail = TailDirection::None;
};

OriginSlopeSeries origin_slope_series(const FlowTrace& trace);

struct GradientBoundFit {
  double C0 = 0.0;                // sup over snapshots/nodes of the ratio
  std::vector<double> times;
  std::vector<double> margin;     // per-snapshot sup ratio
};

// Fit of |theta_r| <= C0 (r^{-1} + (omega_hat - t)^{-1/2}).
GradientBoundFit gradient_bound_fit(const FlowTrace& trace, double omega_hat);

// Eternal-run variant |theta_r| <= C (1 + r^{-1} + (R-r)^{-1}).
double gradient_bound_fit_eternal(const FlowTrace& trace);

struct DissipationAudit {
  std::vector<double> t_left, t_right;
  std::vector<double> defect;           // |E_{n+1} - E_n + D_interval|
  std::vector<double> relative_defect;  // defect / max(|delta E|, floor)
  double cumulative_dissipation = 0.0;
  double initial_energy = 0.0;
  bool cumulative_bounded = true;  // D_total <= E0 * (1 + tol)
};

DissipationAudit energy_dissipation_audit(const FlowTrace& trace, double tol = 0.01);

}  // namespace hmflow

#endif
