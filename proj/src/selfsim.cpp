#include "hmflow/selfsim.hpp"

#include <algorithm>
#include <cmath>

#include "hmflow/errors.hpp"
#include "hmflow/numerics.hpp"

namespace hmflow {

namespace {
constexpr double kYMinPrefix = 1e-3;

double gauge_inverse(RateGauge gauge, double tau) {
  switch (gauge) {
    case RateGauge::Linear:
      return tau;
    case RateGauge::Quadratic:
      return std::sqrt(tau);
    case RateGauge::LogLinear: {
      // invert s log s = tau on [1, inf) by Newton
      double s = std::max(2.0, tau / std::log(std::max(tau, 2.0)));
      for (int it = 0; it < 60; ++it) {
        const double f = s * std::log(s) - tau;
        const double df = std::log(s) + 1.0;
        const double snew = std::max(1.0 + 1e-12, s - f / df);
        if (std::abs(snew - s) < 1e-13 * s) return snew;
        s = snew;
      }
      return s;
    }
  }
  return tau;
}

HermiteTable state_table(const FlowState& st) {
  return HermiteTable(st.grid.nodes(), st.theta, st.theta_r);
}

}  // namespace

std::vector<double> selfsim_y_grid(double y_max, int n_geometric) {
  std::vector<double> y;
  const int n_prefix = 8;
  for (int i = 0; i <= n_prefix; ++i) y.push_back(kYMinPrefix * i / n_prefix);
  const double ratio = std::log(y_max / kYMinPrefix) / n_geometric;
  for (int i = 1; i <= n_geometric; ++i) y.push_back(kYMinPrefix * std::exp(ratio * i));
  y.back() = y_max;
  return y;
}

double cutoff_phi(double x, double delta) {
  if (x <= 0.5 * delta) return 1.0;
  if (x >= delta) return 0.0;
  const double u = (x - 0.5 * delta) / (0.5 * delta);
  return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

std::vector<SelfSimFrame> to_selfsim(const FlowTrace& trace, double omega_hat, double y_max,
                                     int n_geometric) {
  if (!(omega_hat > trace.last_time()))
    throw OmegaInconsistent("to_selfsim: omega_hat must exceed every snapshot time");
  const std::vector<double> y = selfsim_y_grid(y_max, n_geometric);
  std::vector<SelfSimFrame> frames;
  frames.reserve(trace.snapshots.size());
  const double R = trace.params.R;
  const double b = trace.params.b;
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    const FlowState& st = trace.snapshots[k].state;
    SelfSimFrame f;
    f.omega_hat = omega_hat;
    f.snapshot_index = static_cast<int>(k);
    const double tau = omega_hat - st.t;
    f.s = -std::log(tau);
    const double lam = std::sqrt(tau);  // r = lam * y
    f.y = y;
    f.w.resize(y.size());
    f.w_y.resize(y.size());
    HermiteTable tab = state_table(st);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double r = lam * y[i];
      if (r >= R) {
        f.w[i] = b;
        f.w_y[i] = 0.0;
      } else {
        f.w[i] = tab(r);
        f.w_y[i] = lam * tab.deriv(r);
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

LocalEnergies local_energies(const SelfSimFrame& frame, double delta, int m) {
  const auto& y = frame.y;
  const double lam = std::exp(-0.5 * frame.s);
  std::vector<double> f1(y.size()), f2(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double rho = std::exp(-0.25 * y[i] * y[i]);
    if (rho < 1e-18) {
      f1[i] = f2[i] = 0.0;
      continue;
    }
    double ew;
    if (y[i] == 0.0) {
      ew = m * frame.w_y[i] * frame.w_y[i];
    } else {
      const double sw = std::sin(frame.w[i]);
      ew = frame.w_y[i] * frame.w_y[i] + (m - 1) * sw * sw / (y[i] * y[i]);
    }
    const double phi = cutoff_phi(lam * y[i], delta);
    const double base = rho * ew * phi * phi * std::pow(y[i], m - 1);
    f1[i] = base;
    f2[i] = base * y[i] * y[i];
  }
  LocalEnergies out;
  const double half_area = 0.5 * sphere_surface_measure(m);
  out.E = half_area * integrate_samples(y, f1);
  out.Etilde = half_area * integrate_samples(y, f2);
  return out;
}

EnergyTrace energy_trace(const FlowTrace& trace, double omega_hat, double delta, double y_max,
                         int n_geometric) {
  const auto frames = to_selfsim(trace, omega_hat, y_max, n_geometric);
  EnergyTrace et;
  et.delta = delta;
  et.m = trace.params.m;
  et.initial_energy = trace.initial_energy;
  for (const auto& f : frames) {
    const auto le = local_energies(f, delta, trace.params.m);
    et.s.push_back(f.s);
    et.E.push_back(le.E);
    et.Etilde.push_back(le.Etilde);
  }
  // Eq.-(2.13)-style dissipation sum: rho w_s^2 phi^2 between frames.
  const double half_area = 0.5 * sphere_surface_measure(trace.params.m);
  for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
    const auto& a = frames[k];
    const auto& b = frames[k + 1];
    const double ds = b.s - a.s;
    if (!(ds > 0.0)) continue;
    const double s_mid = 0.5 * (a.s + b.s);
    const double lam = std::exp(-0.5 * s_mid);
    std::vector<double> f(a.y.size());
    for (std::size_t i = 0; i < a.y.size(); ++i) {
      const double rho = std::exp(-0.25 * a.y[i] * a.y[i]);
      const double ws = (b.w[i] - a.w[i]) / ds;
      const double phi = cutoff_phi(lam * a.y[i], delta);
      f[i] = rho * ws * ws * phi * phi * std::pow(a.y[i], trace.params.m - 1);
    }
    et.dissipation_sum += 2.0 * half_area * integrate_samples(a.y, f) * ds;
  }
  return et;
}

MonotonicityReport monotonicity_report(const EnergyTrace& et, double kappa, double lambda) {
  if (!(kappa > 1.0))
    throw ParameterOutOfRange("monotonicity_report: kappa must exceed 1");
  if (!(lambda > 8.0))
    throw ParameterOutOfRange("monotonicity_report: lambda must exceed 8");
  MonotonicityReport rep;
  rep.kappa = kappa;
  rep.lambda = lambda;
  const double E0 = std::max(et.initial_energy, 1e-300);
  const double bump = 1.0 + 1.0 / kappa;

  double logC_E = -std::numeric_limits<double>::infinity();
  double logC_V = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < et.s.size(); ++j) {
    for (std::size_t k = j + 1; k < et.s.size(); ++k) {
      const double rawE = et.E[k] - bump * et.E[j];
      rep.worst_raw_defect_energy = std::max(rep.worst_raw_defect_energy, rawE);
      if (rawE > 0.0)
        logC_E = std::max(logC_E, std::log(rawE / E0) + kappa * et.s[j]);
      const double Vk = et.Etilde[k] + lambda * et.E[k];
      const double Vj = et.Etilde[j] + lambda * et.E[j];
      const double rawV = Vk - bump * Vj;
      rep.worst_raw_defect_weighted = std::max(rep.worst_raw_defect_weighted, rawV);
      if (rawV > 0.0)
        logC_V = std::max(logC_V, std::log(rawV / E0) + kappa * et.s[k]);
    }
  }
  rep.fitted_C_energy = std::isfinite(logC_E) ? std::exp(logC_E) : 0.0;
  rep.fitted_C_weighted = std::isfinite(logC_V) ? std::exp(logC_V) : 0.0;

  // residual defects with the fitted constants (zero up to roundoff)
  for (std::size_t j = 0; j < et.s.size(); ++j) {
    for (std::size_t k = j + 1; k < et.s.size(); ++k) {
      const double dE = et.E[k] - bump * et.E[j] -
                        rep.fitted_C_energy * std::exp(-kappa * et.s[j]) * E0;
      rep.defect_after_fit_energy = std::max(rep.defect_after_fit_energy, dE);
      const double Vk = et.Etilde[k] + lambda * et.E[k];
      const double Vj = et.Etilde[j] + lambda * et.E[j];
      const double dV =
          Vk - bump * Vj - rep.fitted_C_weighted * std::exp(-kappa * et.s[k]) * E0;
      rep.defect_after_fit_weighted = std::max(rep.defect_after_fit_weighted, dV);
    }
  }
  rep.dissipation_sum = et.dissipation_sum;
  rep.fitted_C_dissipation = et.dissipation_sum / E0;
  return rep;
}

double cylinder_energy(const FlowTrace& trace, double omega_hat, double r) {
  const double t_lo = omega_hat - r * r;
  const double t_hi = omega_hat - r * r / M_E;
  std::vector<double> T, I;
  for (const auto& snap : trace.snapshots) {
    T.push_back(snap.state.t);
    const auto& st = snap.state;
    const auto& rr = st.grid.nodes();
    auto e = energy_density(st, trace.params);
    std::vector<double> integrand(rr.size(), 0.0);
    for (std::size_t i = 0; i < rr.size(); ++i) {
      if (rr[i] > r) break;
      integrand[i] = e[i] * std::pow(rr[i], trace.params.m - 1);
    }
    I.push_back(sphere_surface_measure(trace.params.m) * integrate_samples(rr, integrand));
  }
  if (T.empty() || T.front() > t_lo + 1e-12 || T.back() < t_hi - 1e-12)
    throw WindowUncovered("cylinder_energy: snapshots do not span the time window");

  // piecewise-linear I(t) integrated over [t_lo, t_hi]
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < T.size(); ++k) {
    const double a = std::max(T[k], t_lo);
    const double b = std::min(T[k + 1], t_hi);
    if (b <= a) continue;
    auto interp = [&](double t) {
      const double u = (t - T[k]) / (T[k + 1] - T[k]);
      return (1.0 - u) * I[k] + u * I[k + 1];
    };
    total += 0.5 * (interp(a) + interp(b)) * (b - a);
  }
  return total / std::pow(r, trace.params.m);
}

std::vector<TypeIIFunctionalPoint> refined_typeII_functional(const FlowTrace& trace,
                                                             double omega_hat,
                                                             RateGauge gauge) {
  if (!(omega_hat > trace.last_time()))
    throw OmegaInconsistent("refined_typeII_functional: omega_hat too small");
  std::vector<TypeIIFunctionalPoint> out;
  double running = 0.0;
  for (const auto& snap : trace.snapshots) {
    const double tau = omega_hat - snap.state.t;
    if (tau >= 1.0 / M_E) continue;  // gauge inverses live on [1, infinity)
    TypeIIFunctionalPoint p;
    p.t = snap.state.t;
    p.s = std::abs(std::log(tau));
    p.b = gauge_inverse(gauge, p.s);
    const double ball = std::sqrt(p.b * tau);
    const auto e = energy_density(snap.state, trace.params);
    const auto& rr = snap.state.grid.nodes();
    double sup = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i) {
      if (rr[i] > ball) break;
      sup = std::max(sup, e[i]);
    }
    p.value = p.b * tau * sup;
    running = std::max(running, p.value);
    p.running_max = running;
    out.push_back(p);
  }
  return out;
}

}  // namespace hmflow
