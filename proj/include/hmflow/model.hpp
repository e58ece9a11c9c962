#ifndef HMFLOW_MODEL_HPP
#define HMFLOW_MODEL_HPP

#include <string>
#include <vector>

#include "hmflow/grid.hpp"

namespace hmflow {

enum class Metric { Flat, SphereStereographic };

enum class InitialData { Linear, Profile, SuperHarmonic, Tabulated };

std::string to_string(Metric m);
std::string to_string(InitialData d);

// Parameters of the radial flow: angle theta(r,t) on [0,R] with theta(0)=0,
// theta(R)=b, in spatial dimension m.
struct FlowParams {
  int m = 3;
  double R = 1.0;
  double b = 1.0;
  Metric metric = Metric::Flat;
  InitialData initial_data = InitialData::Linear;

  // Profile / SuperHarmonic data: initial slope of the steady profile used.
  double profile_slope = 1.0;
  // Tabulated data: samples interpolated onto the grid (monotone cubic).
  std::vector<double> tab_r, tab_theta;

  void validate() const;  // throws std::invalid_argument
};

// One time slice of the flow.  Angles are stored unnormalized (no mod 2*pi);
// theta_r is the stepper's stencil derivative.
struct FlowState {
  double t = 0.0;
  RadialGrid grid;
  std::vector<double> theta;
  std::vector<double> theta_r;
};

// Inverse conformal factor g^{-1}(r): 1 for the flat disk, (1+r^2)^2 for the
// stereographic sphere metric.
double metric_factor(double r, Metric metric);

// Surface measure of the unit (m-1)-sphere.
double sphere_surface_measure(int m);

// Stencil derivative of nodal values: odd extension at r=0, 3-point interior,
// one-sided at r=R.  Shared by the stepper and the energy reporting.
std::vector<double> derivative_on_grid(const RadialGrid& grid, const std::vector<double>& f);

// Energy density e(r) = theta_r^2 + (m-1) sin^2(theta)/r^2, with the odd-data
// limit m*theta_r(0)^2 at the origin.
std::vector<double> energy_density(const FlowState& state, const FlowParams& params);

// Dirichlet energy 0.5*|S^{m-1}| Int e(r) w(r) r^{m-1} dr with w = 1 (flat) or
// g^{(m-2)/2} (sphere; conformal 2-factor convention e_g = g^{-1} e_flat,
// dV_g = g^{m/2} r^{m-1} dr dsigma).
double dirichlet_energy(const FlowState& state, const FlowParams& params);

// Same integrand assembled from raw samples; lets post-processing integrate
// densities it has modified.
double weighted_energy_integral(const RadialGrid& grid, const std::vector<double>& density,
                                const FlowParams& params);

}  // namespace hmflow

#endif
