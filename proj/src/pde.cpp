#include "hmflow/pde.hpp"

#include <algorithm>
#include <cmath>

#include "hmflow/errors.hpp"
#include "hmflow/numerics.hpp"
#include "hmflow/steady.hpp"

namespace hmflow {

std::string to_string(Scheme s) { return s == Scheme::IMEX1 ? "imex1" : "imex2"; }

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::TimeEnd: return "time-end";
    case StopReason::Steady: return "steady";
    case StopReason::BlowupThreshold: return "blowup-threshold";
    case StopReason::ResolutionExhausted: return "resolution-exhausted";
    case StopReason::Degenerate: return "degenerate";
  }
  return "?";
}

namespace {

struct Workspace {
  // Thomas solver storage
  std::vector<double> sub, diag, sup, rhs;
  std::vector<double> nl, stage, out;
};

// Tridiagonal rows of the implicit operator A = g^{-1} (L - (m-1)/r^2) at
// interior nodes; boundary rows are identity.
struct ImplicitOperator {
  std::vector<double> lo, di, up;  // per node; lo[0], up[n-1] unused
  std::vector<double> ginv;        // metric factor per node
};

ImplicitOperator build_operator(const RadialGrid& grid, const FlowParams& p) {
  const auto& r = grid.nodes();
  const std::size_t n = r.size();
  ImplicitOperator op;
  op.lo.assign(n, 0.0);
  op.di.assign(n, 0.0);
  op.up.assign(n, 0.0);
  op.ginv.resize(n);
  for (std::size_t i = 0; i < n; ++i) op.ginv[i] = metric_factor(r[i], p.metric);
  const double mm1 = p.m - 1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = r[i] - r[i - 1];
    const double hr = r[i + 1] - r[i];
    const double cl = 2.0 / (hl * (hl + hr));
    const double cr = 2.0 / (hr * (hl + hr));
    const double cc = -2.0 / (hl * hr);
    const double dl = -hr / (hl * (hl + hr));
    const double dr = hl / (hr * (hl + hr));
    const double dc = (hr - hl) / (hl * hr);
    op.lo[i] = cl + mm1 / r[i] * dl;
    op.up[i] = cr + mm1 / r[i] * dr;
    op.di[i] = cc + mm1 / r[i] * dc - mm1 / (r[i] * r[i]);
  }
  return op;
}

// Explicit remainder (m-1)(theta - sin(2 theta)/2)/r^2 (zero at the origin).
void nonlinear_remainder(const RadialGrid& grid, const std::vector<double>& theta, int m,
                         std::vector<double>& out) {
  const auto& r = grid.nodes();
  out.assign(r.size(), 0.0);
  for (std::size_t i = 1; i + 1 < r.size(); ++i)
    out[i] = (m - 1) * (theta[i] - 0.5 * std::sin(2.0 * theta[i])) / (r[i] * r[i]);
}

// Solve (I - dt A) x = rhs with identity boundary rows.
void solve_implicit(const ImplicitOperator& op, double dt, Workspace& ws,
                    const std::vector<double>& rhs_in, double bc0, double bcR,
                    std::vector<double>& x) {
  const std::size_t n = rhs_in.size();
  ws.sub.assign(n, 0.0);
  ws.diag.assign(n, 1.0);
  ws.sup.assign(n, 0.0);
  ws.rhs = rhs_in;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double f = dt * op.ginv[i];
    ws.sub[i] = -f * op.lo[i];
    ws.diag[i] = 1.0 - f * op.di[i];
    ws.sup[i] = -f * op.up[i];
  }
  ws.rhs[0] = bc0;
  ws.rhs[n - 1] = bcR;
  // Thomas elimination
  for (std::size_t i = 1; i < n; ++i) {
    const double piv = ws.diag[i - 1];
    if (piv == 0.0 || !std::isfinite(piv))
      throw LinearSolveFailure("tridiagonal pivot breakdown");
    const double w = ws.sub[i] / piv;
    ws.diag[i] -= w * ws.sup[i - 1];
    ws.rhs[i] -= w * ws.rhs[i - 1];
  }
  x.resize(n);
  x[n - 1] = ws.rhs[n - 1] / ws.diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (ws.rhs[i] - ws.sup[i] * x[i + 1]) / ws.diag[i];
}

// One IMEX application of size dt starting at (theta, t).
void advance(const ImplicitOperator& op, const RadialGrid& grid, const FlowParams& p,
             const TimeStepperConfig& cfg, const std::vector<double>& theta, double t,
             double dt, Workspace& ws, std::vector<double>& out) {
  const std::size_t n = theta.size();
  const auto& r = grid.nodes();
  nonlinear_remainder(grid, theta, p.m, ws.nl);
  std::vector<double> rhs(n);
  if (cfg.scheme == Scheme::IMEX1) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = theta[i] + dt * op.ginv[i] * ws.nl[i];
    if (cfg.forcing)
      for (std::size_t i = 1; i + 1 < n; ++i) rhs[i] += dt * cfg.forcing(r[i], t);
    solve_implicit(op, dt, ws, rhs, 0.0, p.b, out);
  } else {
    // implicit-midpoint stage, then the (A-stable) midpoint completion
    for (std::size_t i = 0; i < n; ++i) rhs[i] = theta[i] + 0.5 * dt * op.ginv[i] * ws.nl[i];
    if (cfg.forcing)
      for (std::size_t i = 1; i + 1 < n; ++i) rhs[i] += 0.5 * dt * cfg.forcing(r[i], t);
    solve_implicit(op, 0.5 * dt, ws, rhs, 0.0, p.b, ws.stage);
    std::vector<double> nl_star;
    nonlinear_remainder(grid, ws.stage, p.m, nl_star);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = 2.0 * ws.stage[i] - theta[i] + dt * op.ginv[i] * (nl_star[i] - ws.nl[i]);
    if (cfg.forcing)
      for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] += dt * (cfg.forcing(r[i], t + 0.5 * dt) - cfg.forcing(r[i], t));
    out[0] = 0.0;
    out[n - 1] = p.b;
  }
}

double cfl_cap(const RadialGrid& grid, const FlowParams& p, const TimeStepperConfig& cfg,
               const std::vector<double>& theta) {
  const auto& r = grid.nodes();
  double cap = cfg.dt_max;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (std::abs(theta[i]) <= 0.1) continue;
    const double g = metric_factor(r[i], p.metric);
    cap = std::min(cap, cfg.cfl_sigma * r[i] * r[i] / ((p.m - 1) * g));
  }
  return cap;
}

struct StepOutcome {
  std::vector<double> theta;
  double error_estimate;
};

StepOutcome attempt_step(const ImplicitOperator& op, const RadialGrid& grid,
                         const FlowParams& p, const TimeStepperConfig& cfg,
                         const std::vector<double>& theta, double t, double dt,
                         Workspace& ws) {
  std::vector<double> full, half1, half2;
  advance(op, grid, p, cfg, theta, t, dt, ws, full);
  advance(op, grid, p, cfg, theta, t, 0.5 * dt, ws, half1);
  advance(op, grid, p, cfg, half1, t + 0.5 * dt, 0.5 * dt, ws, half2);
  const double order = (cfg.scheme == Scheme::IMEX1) ? 1.0 : 2.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i)
    diff = std::max(diff, std::abs(half2[i] - full[i]));
  StepOutcome out;
  out.error_estimate = diff / (std::pow(2.0, order) - 1.0);
  out.theta = std::move(half2);
  return out;
}

double sup_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

// volume weight for the dissipation integral int u_t^2 dV_g
double dissipation_weight(double r, const FlowParams& p) {
  if (p.metric == Metric::Flat) return std::pow(r, p.m - 1);
  return std::pow(r, p.m - 1) * std::pow(1.0 + r * r, -p.m);  // g^{m/2} r^{m-1}
}

}  // namespace

FlowState initial_state(const FlowParams& params, const RadialGrid& grid) {
  params.validate();
  FlowState st;
  st.t = 0.0;
  st.grid = grid;
  const auto& r = grid.nodes();
  st.theta.resize(r.size());
  switch (params.initial_data) {
    case InitialData::Linear: {
      for (std::size_t i = 0; i < r.size(); ++i) st.theta[i] = params.b * r[i] / params.R;
      break;
    }
    case InitialData::Profile: {
      SteadyProfile prof =
          shoot_profile(params.m, params.profile_slope, params.R, 1e-11);
      for (std::size_t i = 0; i < r.size(); ++i) st.theta[i] = prof.eval(r[i]);
      if (std::abs(st.theta.back() - params.b) > 1e-8)
        throw std::invalid_argument("initial_state: b must equal the profile boundary value");
      break;
    }
    case InitialData::SuperHarmonic: {
      SteadyProfile prof =
          shoot_profile(params.m, params.profile_slope, params.R, 1e-11);
      const double beta = (params.b - prof.eval(params.R)) / params.R;
      if (beta < 0.0)
        throw std::invalid_argument("initial_state: super-harmonic data needs b >= profile(R)");
      for (std::size_t i = 0; i < r.size(); ++i) st.theta[i] = prof.eval(r[i]) + beta * r[i];
      break;
    }
    case InitialData::Tabulated: {
      HermiteTable tab = HermiteTable::pchip(params.tab_r, params.tab_theta);
      for (std::size_t i = 0; i < r.size(); ++i) st.theta[i] = tab(r[i]);
      break;
    }
  }
  st.theta.front() = 0.0;
  st.theta.back() = params.b;
  st.theta_r = derivative_on_grid(grid, st.theta);
  return st;
}

FlowState step(const FlowState& state, double dt, const FlowParams& params,
               const TimeStepperConfig& config) {
  ImplicitOperator op = build_operator(state.grid, params);
  Workspace ws;
  StepOutcome out = attempt_step(op, state.grid, params, config, state.theta, state.t, dt, ws);
  if (out.error_estimate > config.err_tol) throw StepRejected(out.error_estimate);
  FlowState next;
  next.t = state.t + dt;
  next.grid = state.grid;
  next.theta = std::move(out.theta);
  next.theta_r = derivative_on_grid(next.grid, next.theta);
  return next;
}

FlowState regrid(const FlowState& state, const RegridPolicy& policy, double grad_sup,
                 const FlowParams& params) {
  const double scale = 1.0 / std::max(grad_sup, 1e-300);
  if (state.grid.min_spacing() * policy.p_min <= scale) return state;  // resolved
  if (state.grid.depth() >= policy.max_depth)
    throw MaxDepthExceeded("regrid: refinement depth cap reached");
  FlowState next;
  next.t = state.t;
  next.grid = state.grid.refined();
  HermiteTable tab(state.grid.nodes(), state.theta,
                   pchip_slopes(state.grid.nodes(), state.theta));
  next.theta.resize(next.grid.size());
  const auto& rn = next.grid.nodes();
  for (std::size_t i = 0; i < rn.size(); ++i) next.theta[i] = tab(rn[i]);
  next.theta.front() = 0.0;
  next.theta.back() = params.b;
  next.theta_r = derivative_on_grid(next.grid, next.theta);
  return next;
}

FlowTrace run_flow(const FlowParams& params, const TimeStepperConfig& config,
                   const StopRule& stop) {
  params.validate();
  FlowTrace trace;
  trace.params = params;
  trace.config = config;
  trace.stop = stop;

  RadialGrid grid = RadialGrid::graded(params.R, config.base_intervals, config.base_depth);
  FlowState st = initial_state(params, grid);
  trace.initial_energy = dirichlet_energy(st, params);

  const double m_stop = (stop.m_stop > 0.0) ? stop.m_stop : 1e3 / params.R;
  const RegridPolicy policy{config.p_min, config.max_depth};

  std::vector<double> forced = stop.snapshot_times;
  std::sort(forced.begin(), forced.end());
  std::size_t forced_next = 0;

  double cum_diss = 0.0;
  auto push_monitor = [&](double dt_used, double theta_t_sup) {
    MonitorSample ms;
    ms.t = st.t;
    ms.dt = dt_used;
    ms.grad_sup = sup_abs(st.theta_r);
    ms.slope_origin = st.theta_r[0];
    ms.energy = dirichlet_energy(st, params);
    auto e = energy_density(st, params);
    ms.density_sup = sup_abs(e);
    ms.theta_t_sup = theta_t_sup;
    ms.cum_dissipation = cum_diss;
    ms.depth = st.grid.depth();
    trace.monitors.push_back(ms);
  };
  auto push_snapshot = [&]() { trace.snapshots.push_back({st, cum_diss}); };

  push_monitor(0.0, 0.0);
  push_snapshot();
  if (stop.t_end <= 0.0) {
    trace.stop_reason = StopReason::Degenerate;
    return trace;
  }

  // snapshot thinning: next gradient threshold, log-spaced by 2^(1/4)
  const double snap_factor = std::pow(2.0, 0.25);
  double snap_grad = std::max(trace.monitors.back().grad_sup, 1e-6) * snap_factor;

  double dt = std::min(config.dt_init, config.dt_max);
  int steady_hits = 0;
  ImplicitOperator op = build_operator(st.grid, params);
  Workspace ws;

  while (true) {
    // resolution maintenance near the origin
    double grad = sup_abs(st.theta_r);
    while (st.grid.min_spacing() * policy.p_min > 1.0 / std::max(grad, 1e-300)) {
      if (st.grid.depth() >= policy.max_depth) {
        trace.stop_reason = StopReason::ResolutionExhausted;
        push_snapshot();
        return trace;
      }
      st = regrid(st, policy, grad, params);
      op = build_operator(st.grid, params);
      grad = sup_abs(st.theta_r);
    }

    double dt_try = std::min({dt, cfl_cap(st.grid, params, config, st.theta), config.dt_max});
    if (std::isfinite(stop.t_end)) dt_try = std::min(dt_try, stop.t_end - st.t);
    bool hit_forced = false;
    if (forced_next < forced.size() && forced[forced_next] > st.t) {
      const double gap = forced[forced_next] - st.t;
      if (dt_try >= gap) {
        dt_try = gap;
        hit_forced = true;
      }
    }

    StepOutcome out;
    for (;;) {
      out = attempt_step(op, st.grid, params, config, st.theta, st.t, dt_try, ws);
      if (out.error_estimate <= config.err_tol) break;
      dt_try *= 0.5;
      hit_forced = false;
      if (dt_try < config.dt_min)
        throw StepUnderflow("run_flow: dt underflow at t=" + std::to_string(st.t));
    }

    // accepted
    const double dt_used = dt_try;
    std::vector<double> prev = st.theta;
    st.theta = std::move(out.theta);
    st.t += dt_used;
    st.theta_r = derivative_on_grid(st.grid, st.theta);

    // scheme increment quotient: theta_t for monitors and the energy audit
    double theta_t_sup = 0.0;
    {
      const auto& r = st.grid.nodes();
      std::vector<double> integrand(r.size());
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double ut = (st.theta[i] - prev[i]) / dt_used;
        theta_t_sup = std::max(theta_t_sup, std::abs(ut));
        integrand[i] = ut * ut * dissipation_weight(r[i], params);
      }
      cum_diss += dt_used * sphere_surface_measure(params.m) *
                  integrate_samples(r, integrand);
    }
    push_monitor(dt_used, theta_t_sup);

    const double grad_now = trace.monitors.back().grad_sup;
    bool want_snapshot = hit_forced;
    if (grad_now >= snap_grad) {
      want_snapshot = true;
      while (snap_grad <= grad_now) snap_grad *= snap_factor;
    }
    if (hit_forced) ++forced_next;
    if (want_snapshot) push_snapshot();

    // stop rules
    if (grad_now >= m_stop) {
      trace.stop_reason = StopReason::BlowupThreshold;
      break;
    }
    if (std::isfinite(stop.t_end) && st.t >= stop.t_end * (1.0 - 1e-14)) {
      trace.stop_reason = StopReason::TimeEnd;
      break;
    }
    steady_hits = (theta_t_sup <= stop.eta_steady) ? steady_hits + 1 : 0;
    if (steady_hits >= 3) {
      trace.stop_reason = StopReason::Steady;
      break;
    }

    const double order = (config.scheme == Scheme::IMEX1) ? 1.0 : 2.0;
    const double fac = std::clamp(
        config.dt_safety *
            std::pow(config.err_tol / std::max(out.error_estimate, 1e-16 * config.err_tol),
                     1.0 / (order + 1.0)),
        0.3, 2.0);
    dt = std::min(dt_used * fac, config.dt_max);
  }

  if (trace.snapshots.back().state.t != st.t) push_snapshot();
  return trace;
}

}  // namespace hmflow
