#include "hmflow/steady.hpp"

#include <algorithm>
#include <cmath>

#include "hmflow/diagnostics.hpp"
#include "hmflow/errors.hpp"

namespace hmflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool near_half_pi_multiple(double phi, double tol = 1e-7) {
  const double q = phi / (0.5 * kPi);
  return std::abs(q - std::round(q)) * 0.5 * kPi < tol;
}

struct ProfileRhs {
  int m;
  void operator()(double r, const std::array<double, 2>& y, std::array<double, 2>& dy) const {
    dy[0] = y[1];
    dy[1] = -(m - 1) * y[1] / r + (m - 1) * std::sin(2.0 * y[0]) / (2.0 * r * r);
  }
};

}  // namespace

double SteadyProfile::eval(double r) const {
  if (a == 0.0) return 0.0;
  if (r < 0.0) return -eval(-r);
  const double am = std::abs(a);
  if (r <= r_eps_) return sign_ * (am * r + series_c3_ * am * am * am * r * r * r);
  if (r >= r_max) return sign_ * path_.eval(r_max)[0];
  return sign_ * path_.eval(r)[0];
}

double SteadyProfile::eval_deriv(double r) const {
  if (a == 0.0) return 0.0;
  if (r < 0.0) return eval_deriv(-r);
  const double am = std::abs(a);
  if (r <= r_eps_) return sign_ * (am + 3.0 * series_c3_ * am * am * am * r * r);
  if (r >= r_max) return path_.eval(r_max)[1] * sign_;
  return path_.eval(r)[1] * sign_;
}

double SteadyProfile::sup_phi() const {
  double s = 0.0;
  for (double v : phi_samples) s = std::max(s, std::abs(v));
  return s;
}

SteadyProfile shoot_profile(int m, double a, double r_max, double tol) {
  if (m < 2) throw UnsupportedDimension("shoot_profile: m must be >= 2");
  if (!(r_max > 0.0)) throw std::invalid_argument("shoot_profile: r_max must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("shoot_profile: tol must be positive");

  SteadyProfile p;
  p.m = m;
  p.a = a;
  p.r_max = r_max;
  p.ode_tol = tol;
  p.sign_ = (a < 0.0) ? -1 : 1;
  // Origin series Phi = a r + c3 a^3 r^3 + O(r^5); matching O(r) terms of the
  // equation gives c3 = -(m-1)/(3(m+2)).
  p.series_c3_ = -(m - 1.0) / (3.0 * (m + 2.0));

  if (a == 0.0) {
    p.r_samples = {0.0, r_max};
    p.phi_samples = {0.0, 0.0};
    p.dphi_samples = {0.0, 0.0};
    return p;
  }

  const double am = std::abs(a);
  p.r_eps_ = std::max(1e-6 / am, 1e-12);
  const double re = p.r_eps_;
  std::array<double, 2> y0{am * re + p.series_c3_ * am * am * am * re * re * re,
                           am + 3.0 * p.series_c3_ * am * am * am * re * re};
  p.path_ = integrate_dopri5<2>(ProfileRhs{m}, re, y0, r_max, tol, 1e-2 * tol);

  // Dense samples: 4 interior points per accepted step, plus the origin.
  p.r_samples.push_back(0.0);
  p.phi_samples.push_back(0.0);
  p.dphi_samples.push_back(a);
  for (const auto& st : p.path_.steps()) {
    for (int j = 0; j < 4; ++j) {
      const double r = st.x0 + st.h * (j / 4.0);
      if (r <= p.r_samples.back()) continue;
      const auto y = p.path_.eval(r);
      p.r_samples.push_back(r);
      p.phi_samples.push_back(p.sign_ * y[0]);
      p.dphi_samples.push_back(p.sign_ * y[1]);
    }
  }
  p.r_samples.push_back(p.path_.x_end());
  p.phi_samples.push_back(p.sign_ * p.path_.y_end()[0]);
  p.dphi_samples.push_back(p.sign_ * p.path_.y_end()[1]);

  // Extrema: bracket sign changes of Phi' over the sample points, refine with
  // Brent on the continuous extension.
  for (std::size_t i = 1; i + 1 < p.r_samples.size(); ++i) {
    const double d0 = p.dphi_samples[i], d1 = p.dphi_samples[i + 1];
    if (d0 == 0.0 || d0 * d1 >= 0.0) continue;
    auto dphi = [&](double r) { return p.path_.eval(r)[1]; };
    const double rk = brent_root(dphi, p.r_samples[i], p.r_samples[i + 1],
                                 1e-12 * std::max(1.0, p.r_samples[i]));
    p.extrema.emplace_back(rk, p.sign_ * p.path_.eval(rk)[0]);
  }
  return p;
}

SteadyProfile shoot_profile_with_extrema(int m, double a, int K, double tol,
                                         double r_max_hint) {
  double r_max = r_max_hint;
  for (int attempt = 0; attempt < 24; ++attempt) {
    SteadyProfile p = shoot_profile(m, a, r_max, tol);
    if (static_cast<int>(p.extrema.size()) >= K) return p;
    if (m >= 7 || m == 2) return p;  // monotone; growing the horizon is futile
    r_max *= 4.0;
  }
  throw HorizonTooSmall("shoot_profile_with_extrema: horizon growth exhausted");
}

std::vector<std::pair<double, double>> extrema_sequence(const SteadyProfile& profile, int K) {
  if (K < 1) throw std::invalid_argument("extrema_sequence: K must be >= 1");
  if (static_cast<int>(profile.extrema.size()) < K) {
    if (profile.m >= 7 || profile.m == 2)
      throw NotEnoughExtrema("extrema_sequence: profile is monotone for m=" +
                             std::to_string(profile.m));
    throw HorizonTooSmall("extrema_sequence: only " + std::to_string(profile.extrema.size()) +
                          " extrema in horizon, need " + std::to_string(K));
  }
  return {profile.extrema.begin(), profile.extrema.begin() + K};
}

double theta_threshold(int m, double tol) {
  if (m < 3 || m >= 7)
    throw UnsupportedDimension("theta_threshold: defined for 3 <= m < 7, got m=" +
                               std::to_string(m));
  SteadyProfile p = shoot_profile_with_extrema(m, 1.0, 1, tol);
  return p.extrema.front().second;
}

int crossing_count(const SteadyProfile& profile, double level, double r_lo, double r_hi) {
  if (r_lo < 0.0 || r_hi > profile.r_max || r_lo >= r_hi)
    throw std::invalid_argument("crossing_count: window outside sampled range");
  std::vector<double> vals;
  vals.reserve(profile.r_samples.size());
  for (std::size_t i = 0; i < profile.r_samples.size(); ++i) {
    const double r = profile.r_samples[i];
    if (r < r_lo || r > r_hi) continue;
    vals.push_back(profile.phi_samples[i] - level);
  }
  bool all_transparent = false;
  const int count = filtered_sign_changes(vals, 1e-8, &all_transparent);
  return all_transparent ? 0 : count;
}

// ---------------------------------------------------------------------------

double PhasePlaneSolution::w(double phi) const {
  if (phi <= phi_lo || phi >= phi_hi) return 0.0;
  return std::max(table_(phi), 0.0);
}

bool PhasePlaneSolution::endpoint_is_double_zero(bool upper) const {
  return near_half_pi_multiple(upper ? phi_hi : phi_lo);
}

PhasePlaneSolution solve_w_branch(int m, WBranch branch, double phi_lo, double phi_hi,
                                  double tol) {
  if (!(phi_lo < phi_hi)) throw std::invalid_argument("solve_w_branch: empty interval");
  PhasePlaneSolution sol;
  sol.m = m;
  sol.branch = branch;
  sol.phi_lo = phi_lo;
  sol.phi_hi = phi_hi;

  const double sgn = (branch == WBranch::Ascending) ? -1.0 : 1.0;
  auto rhs = [m, sgn](double phi, const std::array<double, 1>& y, std::array<double, 1>& dy) {
    dy[0] = sgn * 2.0 * (m - 2) * std::sqrt(std::max(y[0], 0.0)) +
            (m - 1) * std::sin(2.0 * phi);
  };

  // Start just inside the degenerate left endpoint with the local model:
  // simple zero w ~ s (phi - lo), s = (m-1) sin(2 lo); double zero at a
  // multiple of pi/2 has w ~ (phi - lo)^2 (leading coefficient 1, any m).
  const double span = phi_hi - phi_lo;
  const double h0 = 1e-7 * span;
  double w_start;
  if (near_half_pi_multiple(phi_lo)) {
    w_start = h0 * h0;
  } else {
    const double s = (m - 1) * std::sin(2.0 * phi_lo);
    if (s <= 0.0)
      throw BranchMismatch("solve_w_branch: left endpoint slope not positive");
    w_start = s * h0;
  }

  OdePath<1> path = integrate_dopri5<1>(rhs, phi_lo + h0, std::array<double, 1>{w_start},
                                        phi_hi, tol, 1e-4 * tol);

  // w must come back to zero at phi_hi: either the path crosses zero within
  // matching distance of phi_hi, or it arrives there small (double zero).
  double phi_end = path.x_end();
  double w_end = path.y_end()[0];
  double w_max = w_start;
  for (const auto& st : path.steps()) w_max = std::max(w_max, st.rcont[0][0]);
  const double match_tol = 1e-5 * span + 1e-8;

  bool crossed = false;
  double phi_zero = phi_hi;
  for (const auto& st : path.steps()) {
    const double w0 = st.rcont[0][0];
    const double w1 = path.eval(std::min(st.x0 + st.h, phi_end))[0];
    if (st.x0 <= phi_lo + 0.25 * span) continue;  // skip the degenerate start
    if (w0 > 0.0 && w1 <= 0.0) {
      auto wf = [&](double q) { return path.eval(q)[0]; };
      phi_zero = brent_root(wf, st.x0, std::min(st.x0 + st.h, phi_end), 1e-13);
      crossed = true;
      break;
    }
  }
  if (crossed) {
    if (std::abs(phi_zero - phi_hi) > match_tol)
      throw BranchMismatch("solve_w_branch: w vanishes at phi=" + std::to_string(phi_zero) +
                           ", expected " + std::to_string(phi_hi));
  } else {
    if (!(w_end <= std::max(1e-6 * w_max, 1e-10)) || !near_half_pi_multiple(phi_hi))
      throw BranchMismatch("solve_w_branch: w does not return to zero in the interval");
    phi_zero = phi_end;
  }

  // Assemble dense samples with pinned endpoint zeros.
  sol.phi_samples.push_back(phi_lo);
  sol.w_samples.push_back(0.0);
  sol.dw_samples.push_back(near_half_pi_multiple(phi_lo) ? 0.0
                                                         : (m - 1) * std::sin(2.0 * phi_lo));
  for (const auto& st : path.steps()) {
    for (int j = 0; j < 4; ++j) {
      const double q = st.x0 + st.h * (j / 4.0);
      if (q <= sol.phi_samples.back() || q >= phi_zero) continue;
      const double wv = std::max(path.eval(q)[0], 0.0);
      std::array<double, 1> dv;
      std::array<double, 1> yv{wv};
      rhs(q, yv, dv);
      sol.phi_samples.push_back(q);
      sol.w_samples.push_back(wv);
      sol.dw_samples.push_back(dv[0]);
    }
  }
  sol.phi_samples.push_back(phi_hi);
  sol.w_samples.push_back(0.0);
  sol.dw_samples.push_back(near_half_pi_multiple(phi_hi) ? 0.0
                                                         : (m - 1) * std::sin(2.0 * phi_hi));
  sol.table_ = HermiteTable(sol.phi_samples, sol.w_samples, sol.dw_samples);
  return sol;
}

double radius_from_w(const PhasePlaneSolution& sol, double phi0, double r0, double phi) {
  const double lo = sol.phi_lo, hi = sol.phi_hi;
  const double edge = 1e-9 * (hi - lo);
  if (!(r0 > 0.0)) throw std::invalid_argument("radius_from_w: r0 must be positive");
  if (phi0 <= lo + edge || phi0 >= hi - edge)
    throw std::invalid_argument("radius_from_w: phi0 must be strictly inside the branch");
  if (phi < lo - edge || phi > hi + edge)
    throw std::invalid_argument("radius_from_w: phi outside the branch");
  if (phi == phi0) return r0;

  const bool hits_lo = (phi <= lo + edge);
  const bool hits_hi = (phi >= hi - edge);
  if ((hits_lo && sol.endpoint_is_double_zero(false)) ||
      (hits_hi && sol.endpoint_is_double_zero(true)))
    throw QuadratureDivergence("radius_from_w: integral diverges at a double zero of w");

  auto integrand = [&](double tau) { return 1.0 / std::sqrt(std::max(sol.w(tau), 1e-300)); };

  const double p1 = std::min(phi0, phi), p2 = std::max(phi0, phi);
  double integral = 0.0;
  const double qtol = 1e-10;
  if (hits_lo) {
    // substitute tau = lo + u^2; du-integrand 2u/sqrt(w) is regular at u = 0
    const double cut = std::min(p2, lo + 0.1 * (hi - lo));
    const double s = (sol.m - 1) * std::sin(2.0 * lo);
    auto sub = [&](double u) {
      const double tau = lo + u * u;
      const double wv = (tau <= lo + 1e-14) ? s * (u * u) : sol.w(tau);
      return 2.0 * u / std::sqrt(std::max(wv, 1e-300));
    };
    integral += integrate_adaptive(sub, 0.0, std::sqrt(cut - lo), qtol);
    if (cut < p2) integral += integrate_adaptive(integrand, cut, p2, qtol);
  } else if (hits_hi) {
    const double cut = std::max(p1, hi - 0.1 * (hi - lo));
    const double s = -(sol.m - 1) * std::sin(2.0 * hi);  // w ~ s (hi - tau)
    auto sub = [&](double u) {
      const double tau = hi - u * u;
      const double wv = (tau >= hi - 1e-14) ? s * (u * u) : sol.w(tau);
      return 2.0 * u / std::sqrt(std::max(wv, 1e-300));
    };
    if (p1 < cut) integral += integrate_adaptive(integrand, p1, cut, qtol);
    integral += integrate_adaptive(sub, 0.0, std::sqrt(hi - cut), qtol);
  } else {
    integral = integrate_adaptive(integrand, p1, p2, qtol);
  }
  if (phi < phi0) integral = -integral;
  const double orient = (sol.branch == WBranch::Ascending) ? 1.0 : -1.0;
  return r0 * std::exp(orient * integral);
}

}  // namespace hmflow
