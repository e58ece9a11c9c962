#include "hmflow/model.hpp"

#include <cmath>
#include <stdexcept>

#include "hmflow/numerics.hpp"

namespace hmflow {

std::string to_string(Metric m) {
  return m == Metric::Flat ? "flat" : "sphere-stereographic";
}

std::string to_string(InitialData d) {
  switch (d) {
    case InitialData::Linear: return "linear";
    case InitialData::Profile: return "profile";
    case InitialData::SuperHarmonic: return "super-harmonic";
    case InitialData::Tabulated: return "tabulated";
  }
  return "?";
}

void FlowParams::validate() const {
  if (m < 2) throw std::invalid_argument("FlowParams: m must be >= 2");
  if (!(R > 0.0)) throw std::invalid_argument("FlowParams: R must be positive");
  if (initial_data == InitialData::Tabulated) {
    if (tab_r.size() != tab_theta.size() || tab_r.size() < 2)
      throw std::invalid_argument("FlowParams: bad tabulated data");
    if (tab_r.front() != 0.0 || tab_theta.front() != 0.0)
      throw std::invalid_argument("FlowParams: tabulated data must start at (0,0)");
  }
}

double metric_factor(double r, Metric metric) {
  if (metric == Metric::Flat) return 1.0;
  const double q = 1.0 + r * r;
  return q * q;
}

double sphere_surface_measure(int m) {
  // 2 pi^{m/2} / Gamma(m/2)
  return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m);
}

std::vector<double> derivative_on_grid(const RadialGrid& grid, const std::vector<double>& f) {
  const auto& r = grid.nodes();
  const std::size_t n = r.size();
  std::vector<double> df(n);
  // Origin: odd extension f(-r) = -f(r) makes the centered difference
  // (f1 - f(-r1)) / (2 r1) = f1 / r1, second order for odd data.
  df[0] = f[1] / r[1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = r[i] - r[i - 1];
    const double hr = r[i + 1] - r[i];
    df[i] = (hl * hl * f[i + 1] + (hr * hr - hl * hl) * f[i] - hr * hr * f[i - 1]) /
            (hl * hr * (hl + hr));
  }
  const double h1 = r[n - 1] - r[n - 2];
  const double h2 = r[n - 2] - r[n - 3];
  // Second-order one-sided difference at r = R.
  df[n - 1] = (f[n - 1] * (2.0 * h1 + h2) / (h1 * (h1 + h2)) - f[n - 2] * (h1 + h2) / (h1 * h2) +
               f[n - 3] * h1 / (h2 * (h1 + h2)));
  return df;
}

std::vector<double> energy_density(const FlowState& state, const FlowParams& params) {
  const auto& r = state.grid.nodes();
  const std::size_t n = r.size();
  std::vector<double> e(n);
  e[0] = params.m * state.theta_r[0] * state.theta_r[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double s = std::sin(state.theta[i]);
    e[i] = state.theta_r[i] * state.theta_r[i] + (params.m - 1) * s * s / (r[i] * r[i]);
  }
  return e;
}

double weighted_energy_integral(const RadialGrid& grid, const std::vector<double>& density,
                                const FlowParams& params) {
  const auto& r = grid.nodes();
  std::vector<double> integrand(r.size());
  const double half_w = 0.5 * (params.m - 2);
  for (std::size_t i = 0; i < r.size(); ++i) {
    double w = 1.0;
    if (params.metric == Metric::SphereStereographic)
      w = std::pow(1.0 + r[i] * r[i], -2.0 * half_w);  // g^{(m-2)/2}
    integrand[i] = density[i] * w * std::pow(r[i], params.m - 1);
  }
  return 0.5 * sphere_surface_measure(params.m) * integrate_samples(r, integrand);
}

double dirichlet_energy(const FlowState& state, const FlowParams& params) {
  return weighted_energy_integral(state.grid, energy_density(state, params), params);
}

}  // namespace hmflow
