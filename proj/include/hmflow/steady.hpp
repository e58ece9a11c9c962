#ifndef HMFLOW_STEADY_HPP
#define HMFLOW_STEADY_HPP

#include <utility>
#include <vector>

#include "hmflow/numerics.hpp"
#include "hmflow/ode.hpp"

namespace hmflow {

// Half-entire steady profile obtained by shooting from the origin with slope
// a: Phi'' + (m-1)Phi'/r - (m-1) sin(2 Phi)/(2 r^2) = 0, Phi(0) = 0.
// The scaling family is Phi_a(r) = Phi_1(a r).
class SteadyProfile {
 public:
  int m = 3;
  double a = 1.0;
  double r_max = 0.0;
  double ode_tol = 1e-10;

  // Dense output samples (accepted integrator steps plus subsamples).
  std::vector<double> r_samples, phi_samples, dphi_samples;
  // Critical points (r_k, omega_k), ordered in r.
  std::vector<std::pair<double, double>> extrema;

  double eval(double r) const;        // Phi(r)
  double eval_deriv(double r) const;  // Phi'(r)
  double sup_phi() const;

 private:
  friend SteadyProfile shoot_profile(int m, double a, double r_max, double tol);
  double r_eps_ = 0.0;
  double series_c3_ = 0.0;  // Phi ~ a r + c3 a^3 r^3 near the origin
  int sign_ = 1;
  OdePath<2> path_;
};

// Adaptive shooting integration on [0, r_max].  a = 0 returns the trivial
// profile; a < 0 uses the odd symmetry Phi_{-a} = -Phi_a.
SteadyProfile shoot_profile(int m, double a, double r_max, double tol = 1e-10);

// shoot_profile with the horizon doubled until K extrema are present.
SteadyProfile shoot_profile_with_extrema(int m, double a, int K, double tol = 1e-10,
                                         double r_max_hint = 50.0);

// First K critical points (r_k, omega_k).  Throws NotEnoughExtrema when the
// profile is monotone (m >= 7 or m == 2), HorizonTooSmall when the horizon is
// simply too short for the requested count.
std::vector<std::pair<double, double>> extrema_sequence(const SteadyProfile& profile, int K);

// omega_1 of Phi_1: the blowup threshold boundary angle, in (pi/2, pi) for
// 3 <= m < 7.  Independent of the shooting slope by scaling invariance.
double theta_threshold(int m, double tol = 1e-10);

// Sign changes of Phi - level on [r_lo, r_hi], tolerance-filtered with the
// same rule diagnostics uses for zero numbers.
int crossing_count(const SteadyProfile& profile, double level, double r_lo, double r_hi);

// Phase-plane reduction w(Phi) = (r Phi')^2 on one monotonicity branch:
//   ascending:  w' + 2(m-2) sqrt(w) - (m-1) sin(2 Phi) = 0
//   descending: w' - 2(m-2) sqrt(w) - (m-1) sin(2 Phi) = 0
// with w = 0 at both endpoints (double zero at multiples of pi/2).
enum class WBranch { Ascending, Descending };

class PhasePlaneSolution {
 public:
  int m = 3;
  WBranch branch = WBranch::Ascending;
  double phi_lo = 0.0, phi_hi = 0.0;
  std::vector<double> phi_samples, w_samples, dw_samples;

  double w(double phi) const;  // clamped >= 0
  bool endpoint_is_double_zero(bool upper) const;

 private:
  friend PhasePlaneSolution solve_w_branch(int m, WBranch branch, double phi_lo, double phi_hi,
                                           double tol);
  HermiteTable table_;
};

PhasePlaneSolution solve_w_branch(int m, WBranch branch, double phi_lo, double phi_hi,
                                  double tol = 1e-10);

// Resolution formula: r = r0 * exp(+-Integral dphi/sqrt(w)).  phi may equal a
// branch endpoint only where the endpoint zero is simple; at a double zero the
// integral diverges (QuadratureDivergence).
double radius_from_w(const PhasePlaneSolution& sol, double phi0, double r0, double phi);

}  // namespace hmflow

#endif
