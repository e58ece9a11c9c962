#include "hmflow/blowup.hpp"

#include <algorithm>
#include <cmath>

#include "hmflow/errors.hpp"
#include "hmflow/numerics.hpp"

namespace hmflow {

std::string to_string(RateClass c) {
  switch (c) {
    case RateClass::TypeI: return "type-I";
    case RateClass::TypeII: return "type-II";
    case RateClass::Undetermined: return "undetermined";
    case RateClass::NoBlowup: return "no-blowup";
  }
  return "?";
}

BlowupEstimate estimate_blowup_time(const std::vector<double>& t,
                                    const std::vector<double>& grad_sup,
                                    double residual_threshold) {
  if (t.size() != grad_sup.size() || t.size() < 4)
    throw std::invalid_argument("estimate_blowup_time: bad series");
  double m_max = 0.0, m_min_pos = 0.0;
  for (double m : grad_sup)
    if (m > 0.0) {
      m_max = std::max(m_max, m);
      m_min_pos = (m_min_pos == 0.0) ? m : std::min(m_min_pos, m);
    }
  if (!(m_max >= 1e3 * m_min_pos))
    throw InsufficientGrowth("estimate_blowup_time: gradient grew less than 10^3");

  // last two decades of m
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (grad_sup[i] >= 1e-2 * m_max) {
      x.push_back(t[i]);
      y.push_back(1.0 / (grad_sup[i] * grad_sup[i]));
    }
  }
  if (x.size() < 4) throw InsufficientGrowth("estimate_blowup_time: too few late samples");
  const LineFit fit = fit_line(x, y);
  if (!(fit.slope < 0.0))
    throw InsufficientGrowth("estimate_blowup_time: gradient not increasing");
  BlowupEstimate est;
  est.omega_hat = -fit.intercept / fit.slope;
  double yscale = 0.0;
  for (double v : y) yscale = std::max(yscale, std::abs(v));
  est.fit_residual = fit.rms_residual / std::max(yscale, 1e-300);
  est.reliable = est.fit_residual < residual_threshold;
  return est;
}

BlowupEstimate estimate_blowup_time(const FlowTrace& trace, double residual_threshold) {
  std::vector<double> t, m;
  t.reserve(trace.monitors.size());
  for (const auto& ms : trace.monitors) {
    t.push_back(ms.t);
    m.push_back(ms.grad_sup);
  }
  return estimate_blowup_time(t, m, residual_threshold);
}

RateClass classify_q_series(const std::vector<double>& t, const std::vector<double>& Q,
                            double omega_hat, double ratio_max) {
  if (t.size() != Q.size() || t.size() < 5) return RateClass::Undetermined;
  const double d_last = omega_hat - t.back();
  if (!(d_last > 0.0)) return RateClass::Undetermined;

  // monotone divergence over the whole resolved series (1% dip tolerance)
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < Q.size(); ++i)
    if (Q[i + 1] < 0.99 * Q[i]) {
      monotone = false;
      break;
    }
  const double total_growth = Q.back() / std::max(Q.front(), 1e-300);
  if (monotone && total_growth > ratio_max) return RateClass::TypeII;

  // plateau over the final two decades of omega - t
  double qmin = 0.0, qmax = 0.0;
  int n_window = 0;
  for (std::size_t i = 0; i < Q.size(); ++i) {
    if (omega_hat - t[i] > 100.0 * d_last) continue;
    if (n_window == 0) {
      qmin = qmax = Q[i];
    } else {
      qmin = std::min(qmin, Q[i]);
      qmax = std::max(qmax, Q[i]);
    }
    ++n_window;
  }
  if (n_window < 5 || !(qmin > 0.0)) return RateClass::Undetermined;
  if (qmax / qmin < ratio_max && !monotone) return RateClass::TypeI;
  return RateClass::Undetermined;
}

BlowupReport classify_rate(const FlowTrace& trace, const BlowupEstimate& est) {
  BlowupReport rep;
  rep.omega_hat = est.omega_hat;
  rep.fit_residual = est.fit_residual;

  std::vector<double> t, Q;
  for (const auto& snap : trace.snapshots) {
    if (snap.state.t >= est.omega_hat) continue;
    FlowState st = snap.state;
    const auto e = energy_density(st, trace.params);
    double sup = 0.0;
    for (double v : e) sup = std::max(sup, v);
    t.push_back(st.t);
    Q.push_back((est.omega_hat - st.t) * sup);
    rep.Q_series.emplace_back(st.t, Q.back());
  }
  for (const auto& ms : trace.monitors) rep.slope_series.emplace_back(ms.t, ms.slope_origin);

  rep.classification = classify_q_series(t, Q, est.omega_hat, 10.0);
  rep.class_at_ratio5 = classify_q_series(t, Q, est.omega_hat, 5.0);
  rep.class_at_ratio20 = classify_q_series(t, Q, est.omega_hat, 20.0);

  if (!t.empty()) {
    const double d_last = est.omega_hat - t.back();
    double qmin = 0.0, qmax = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < Q.size(); ++i) {
      if (est.omega_hat - t[i] > 100.0 * d_last) continue;
      if (first) {
        qmin = qmax = Q[i];
        first = false;
      } else {
        qmin = std::min(qmin, Q[i]);
        qmax = std::max(qmax, Q[i]);
      }
    }
    rep.q_ratio_final_decades = (qmin > 0.0) ? qmax / qmin : 0.0;
  }
  return rep;
}

double rescaled_profile_compare(const FlowState& state, const SteadyProfile& bubble,
                                double y_lo, double y_hi) {
  const double slope = state.theta_r[0];
  if (std::abs(slope) < 10.0)
    throw SlopeTooSmall("rescaled_profile_compare: |theta_r(0)| < 10, not in bubble regime");
  const double lambda = 1.0 / std::abs(slope);
  const double sign = (slope > 0.0) ? 1.0 : -1.0;
  HermiteTable tab(state.grid.nodes(), state.theta, state.theta_r);
  double err = 0.0;
  const int n = 512;
  for (int i = 0; i <= n; ++i) {
    const double y = y_lo + (y_hi - y_lo) * i / n;
    const double r = lambda * y;
    if (r > state.grid.radius()) break;
    err = std::max(err, std::abs(tab(r) - sign * bubble.eval(y)));
  }
  return err;
}

SuperharmonicData superharmonic_data(int m, double a, double b, const RadialGrid& grid,
                                     double tol) {
  // theta_threshold guards the dimension range (UnsupportedDimension for m>=7).
  theta_threshold(m, 1e-8);
  const double R = grid.radius();
  SteadyProfile prof = shoot_profile(m, a, R, 1e-11);
  const double phiR = prof.eval(R);
  if (!(phiR > 0.5 * M_PI && phiR < M_PI))
    throw ProfileOutOfRange("superharmonic_data: Phi_a(R) must lie in (pi/2, pi), got " +
                            std::to_string(phiR));
  const double beta = (b - phiR) / R;
  if (beta < 0.0)
    throw ProfileOutOfRange("superharmonic_data: b must be >= Phi_a(R)");

  SuperharmonicData out;
  out.a = a;
  out.beta = beta;
  out.profile_boundary_value = phiR;
  out.state0.t = 0.0;
  out.state0.grid = grid;
  const auto& r = grid.nodes();
  out.state0.theta.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    out.state0.theta[i] = prof.eval(r[i]) + beta * r[i];
  out.state0.theta.front() = 0.0;
  out.state0.theta.back() = b;
  out.state0.theta_r = derivative_on_grid(grid, out.state0.theta);

  // Tension residual of theta_0 = Phi_a + beta r: since Phi_a solves the
  // profile equation exactly, z reduces to
  //   z = (m-1)/r^2 * (beta r - cos(2 Phi_a + beta r) sin(beta r)),
  // which is well conditioned down to r -> 0 (z -> 0 there).
  out.residual_z.assign(r.size(), 0.0);
  out.min_residual = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double phi = prof.eval(r[i]);
    const double z = (m - 1) / (r[i] * r[i]) *
                     (beta * r[i] - std::cos(2.0 * phi + beta * r[i]) * std::sin(beta * r[i]));
    out.residual_z[i] = z;
    out.min_residual = std::min(out.min_residual, z);
  }
  if (out.min_residual < -tol)
    throw InequalityViolated("superharmonic_data: tension residual " +
                             std::to_string(out.min_residual) + " below -tol");
  return out;
}

double monotone_in_time_check(const FlowTrace& trace) {
  double min_rate = 0.0;
  bool any = false;
  for (std::size_t k = 0; k + 1 < trace.snapshots.size(); ++k) {
    const FlowState& s0 = trace.snapshots[k].state;
    const FlowState& s1 = trace.snapshots[k + 1].state;
    const double dt = s1.t - s0.t;
    if (!(dt > 0.0)) continue;
    // common nodes: the coarser grid is a subset of the finer one
    const FlowState& coarse = (s0.grid.size() <= s1.grid.size()) ? s0 : s1;
    const FlowState& fine = (s0.grid.size() <= s1.grid.size()) ? s1 : s0;
    const bool forward = (s0.grid.size() <= s1.grid.size());
    const auto& rc = coarse.grid.nodes();
    for (std::size_t i = 0; i < rc.size(); ++i) {
      std::size_t j = fine.grid.locate(rc[i]);
      if (fine.grid.node(j) != rc[i]) ++j;
      const double v0 = forward ? coarse.theta[i] : fine.theta[j];
      const double v1 = forward ? fine.theta[j] : coarse.theta[i];
      const double rate = (v1 - v0) / dt;
      if (!any || rate < min_rate) {
        min_rate = rate;
        any = true;
      }
    }
  }
  return min_rate;
}

}  // namespace hmflow
