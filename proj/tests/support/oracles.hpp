// Test-only oracles, kept independent of the library's integration path:
// an adaptive Bogacki-Shampine 3(2) integrator with a plain I-controller,
// used to cross-check the production Dormand-Prince results.
#ifndef HMFLOW_TESTS_ORACLES_HPP
#define HMFLOW_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

template <std::size_t N, typename F>
std::array<double, N> integrate_bs23(F&& f, double x0, std::array<double, N> y, double x_end,
                                     double tol) {
  double x = x0;
  double h = 1e-6 * (std::abs(x_end - x0) + 1.0);
  std::array<double, N> k1, k2, k3, k4, yt, ynew;
  f(x, y, k1);
  long guard = 0;
  while (x < x_end) {
    if (++guard > 50000000) throw std::runtime_error("bs23: step budget exhausted");
    if (x + h > x_end) h = x_end - x;
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + 0.5 * h * k1[i];
    f(x + 0.5 * h, yt, k2);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + 0.75 * h * k2[i];
    f(x + 0.75 * h, yt, k3);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (2.0 / 9 * k1[i] + 1.0 / 3 * k2[i] + 4.0 / 9 * k3[i]);
    f(x + h, ynew, k4);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e =
          h * (-5.0 / 72 * k1[i] + 1.0 / 12 * k2[i] + 1.0 / 9 * k3[i] - 1.0 / 8 * k4[i]);
      err = std::max(err, std::abs(e) / (tol + tol * std::abs(ynew[i])));
    }
    if (err <= 1.0) {
      x += h;
      y = ynew;
      k1 = k4;
      h *= std::min(3.0, 0.85 * std::pow(std::max(err, 1e-14), -1.0 / 3.0));
    } else {
      h *= std::max(0.2, 0.85 * std::pow(err, -1.0 / 3.0));
    }
  }
  return y;
}

// Steady-profile equation as a first-order system for the oracle integrator.
inline std::array<double, 2> profile_oracle(int m, double a, double r_end, double tol) {
  const double c3 = -(m - 1.0) / (3.0 * (m + 2.0));
  const double re = 1e-6 / std::abs(a);
  std::array<double, 2> y{a * re + c3 * a * a * a * re * re * re,
                          a + 3.0 * c3 * a * a * a * re * re};
  auto rhs = [m](double r, const std::array<double, 2>& u, std::array<double, 2>& du) {
    du[0] = u[1];
    du[1] = -(m - 1) * u[1] / r + (m - 1) * std::sin(2.0 * u[0]) / (2.0 * r * r);
  };
  return integrate_bs23<2>(rhs, re, y, r_end, tol);
}

// First maximum of the unit-slope profile located by the oracle integrator
// alone: coarse scan for the sign change of Phi', then bisection with fresh
// integrations from the origin each time.
inline double theta_threshold_oracle(int m, double tol) {
  double r_lo = 0.0, r_hi = 0.0;
  double prev_r = 0.05, prev_d = 1.0;
  for (double r = 0.1; r < 400.0; r *= 1.05) {
    const auto y = profile_oracle(m, 1.0, r, tol);
    if (y[1] < 0.0) {
      r_lo = prev_r;
      r_hi = r;
      break;
    }
    prev_r = r;
    prev_d = y[1];
  }
  (void)prev_d;
  if (r_hi == 0.0) throw std::runtime_error("theta_threshold_oracle: no extremum found");
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (r_lo + r_hi);
    const auto y = profile_oracle(m, 1.0, mid, tol);
    (y[1] > 0.0 ? r_lo : r_hi) = mid;
    if (r_hi - r_lo < 1e-11 * r_hi) break;
  }
  return profile_oracle(m, 1.0, 0.5 * (r_lo + r_hi), tol)[0];
}

}  // namespace oracle

#endif
