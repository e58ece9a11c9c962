#ifndef HMFLOW_BLOWUP_HPP
#define HMFLOW_BLOWUP_HPP

#include <string>
#include <utility>
#include <vector>

#include "hmflow/pde.hpp"
#include "hmflow/steady.hpp"

namespace hmflow {

struct BlowupEstimate {
  double omega_hat = 0.0;
  double fit_residual = 0.0;  // normalized RMS of the m^{-2} line fit
  bool reliable = false;      // fit_residual below threshold
};

// Least-squares line through m(t)^{-2} vs t over the last two decades of the
// gradient monitor; omega_hat is the root of the fit.  Requires m(t) to have
// grown by >= 10^3 over the trace (InsufficientGrowth otherwise).
BlowupEstimate estimate_blowup_time(const std::vector<double>& t,
                                    const std::vector<double>& grad_sup,
                                    double residual_threshold = 1e-3);

BlowupEstimate estimate_blowup_time(const FlowTrace& trace,
                                    double residual_threshold = 1e-3);

enum class RateClass { TypeI, TypeII, Undetermined, NoBlowup };

std::string to_string(RateClass c);

// Core classifier on a Q(t) = (omega-t) sup e series: TypeI when Q stays
// within ratio_max over the final two resolved decades of omega-t and shows
// no monotone divergence; TypeII when Q grows monotonically past ratio_max.
RateClass classify_q_series(const std::vector<double>& t, const std::vector<double>& Q,
                            double omega_hat, double ratio_max = 10.0);

struct BlowupReport {
  double omega_hat = 0.0;
  double fit_residual = 0.0;
  RateClass classification = RateClass::NoBlowup;
  RateClass class_at_ratio5 = RateClass::NoBlowup;   // sensitivity report
  RateClass class_at_ratio20 = RateClass::NoBlowup;
  double q_ratio_final_decades = 0.0;
  std::vector<std::pair<double, double>> Q_series;      // (t, Q)
  std::vector<std::pair<double, double>> slope_series;  // (t, theta_r(0,t))
  double bubble_error = -1.0;  // sup-norm mismatch vs the rescaled bubble; <0 if unset
};

BlowupReport classify_rate(const FlowTrace& trace, const BlowupEstimate& est);

// Rescaled bubble comparison at one state: lambda = 1/theta_r(0,t) (matching
// Phi_1'(0) = 1), returns sup_{y in [y_lo, y_hi]} |theta(lambda y) - sign Phi_1(y)|.
double rescaled_profile_compare(const FlowState& state, const SteadyProfile& bubble,
                                double y_lo = 0.0, double y_hi = 5.0);

struct SuperharmonicData {
  FlowState state0;
  double a = 0.0, beta = 0.0;
  double min_residual = 0.0;          // min over nodes of z(r)
  std::vector<double> residual_z;     // tension residual per node
  double profile_boundary_value = 0.0;  // Phi_a(R)
};

// Lemma-7.1-style data theta_0 = Phi_a(r) + beta r with beta = b - Phi_a(R) on
// [0, R]; certifies the differential inequality z >= -tol on the grid.
SuperharmonicData superharmonic_data(int m, double a, double b, const RadialGrid& grid,
                                     double tol = 1e-8);

// Min over snapshot pairs and common nodes of the discrete theta_t.
double monotone_in_time_check(const FlowTrace& trace);

}  // namespace hmflow

#endif
