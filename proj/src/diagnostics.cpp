#include "hmflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "hmflow/errors.hpp"

namespace hmflow {

int filtered_sign_changes(const std::vector<double>& v, double eta_rel,
                          bool* all_transparent) {
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double eta = eta_rel * vmax;
  int count = 0;
  int last_sign = 0;
  bool any = false;
  for (double x : v) {
    if (std::abs(x) <= eta) continue;
    any = true;
    const int s = (x > 0.0) ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++count;
    last_sign = s;
  }
  if (all_transparent) *all_transparent = !any;
  return count;
}

int zero_number(const std::vector<double>& v, double eta_rel) {
  bool flat = false;
  const int c = filtered_sign_changes(v, eta_rel, &flat);
  if (flat) throw AllBelowTolerance("zero_number: every sample below tolerance");
  return c;
}

namespace {

ZeroCountSeries finish_series(ZeroCountSeries s) {
  int last = -1;
  for (std::size_t k = 0; k < s.counts.size(); ++k) {
    if (s.all_transparent[k]) continue;
    if (last >= 0) {
      if (s.counts[k] > last) s.non_increasing = false;
      if (s.counts[k] < last) s.drop_events.push_back(s.times[k]);
    }
    last = s.counts[k];
  }
  return s;
}

}  // namespace

ZeroCountSeries intersection_series(const FlowTrace& trace,
                                    const std::function<double(double)>& reference,
                                    double eta_rel) {
  ZeroCountSeries s;
  s.eta = eta_rel;
  for (const auto& snap : trace.snapshots) {
    const auto& r = snap.state.grid.nodes();
    std::vector<double> diff(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) diff[i] = snap.state.theta[i] - reference(r[i]);
    bool flat = false;
    const int c = filtered_sign_changes(diff, eta_rel, &flat);
    s.times.push_back(snap.state.t);
    s.counts.push_back(flat ? 0 : c);
    s.all_transparent.push_back(flat ? 1 : 0);
  }
  return finish_series(std::move(s));
}

ZeroCountSeries intersection_series_pair(const FlowTrace& a, const FlowTrace& b,
                                         double eta_rel) {
  ZeroCountSeries s;
  s.eta = eta_rel;
  const std::size_t n = std::min(a.snapshots.size(), b.snapshots.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& sa = a.snapshots[k].state;
    const auto& sb = b.snapshots[k].state;
    // Compare on the common node set; refinement only inserts nodes, so the
    // coarser grid's nodes carry exact values in both runs.
    const FlowState& coarse = (sa.grid.size() <= sb.grid.size()) ? sa : sb;
    const FlowState& fine = (sa.grid.size() <= sb.grid.size()) ? sb : sa;
    const auto& rc = coarse.grid.nodes();
    std::vector<double> diff;
    diff.reserve(rc.size());
    for (std::size_t i = 0; i < rc.size(); ++i) {
      std::size_t j = fine.grid.locate(rc[i]);
      if (fine.grid.node(j) != rc[i]) ++j;
      diff.push_back(coarse.theta[i] - fine.theta[j]);
    }
    bool flat = false;
    const int c = filtered_sign_changes(diff, eta_rel, &flat);
    s.times.push_back(sa.t);
    s.counts.push_back(flat ? 0 : c);
    s.all_transparent.push_back(flat ? 1 : 0);
  }
  return finish_series(std::move(s));
}

OriginSlopeSeries origin_slope_series(const FlowTrace& trace) {
  OriginSlopeSeries s;
  for (const auto& ms : trace.monitors) {
    s.times.push_back(ms.t);
    s.slopes.push_back(ms.slope_origin);
  }
  const std::size_t n = s.slopes.size();
  if (n < 2) {
    s.tail = TailDirection::None;
    return s;
  }
  double scale = 0.0;
  for (double v : s.slopes) scale = std::max(scale, std::abs(v));
  const double eps = 1e-12 * std::max(scale, 1.0);

  // Largest strictly monotone suffix; a flat tail is reported as constant.
  auto dir_of = [&](double d) { return d > eps ? 1 : (d < -eps ? -1 : 0); };
  int dir = dir_of(s.slopes[n - 1] - s.slopes[n - 2]);
  std::size_t start = n - 2;
  while (start > 0) {
    const int d = dir_of(s.slopes[start] - s.slopes[start - 1]);
    if (d != dir) break;
    --start;
  }
  s.tail_start = start;
  s.tail = dir > 0 ? TailDirection::Increasing
                   : (dir < 0 ? TailDirection::Decreasing : TailDirection::Constant);
  return s;
}

GradientBoundFit gradient_bound_fit(const FlowTrace& trace, double omega_hat) {
  if (!(omega_hat > trace.last_time()))
    throw OmegaInconsistent("gradient_bound_fit: omega_hat must exceed the last trace time");
  GradientBoundFit fit;
  for (const auto& snap : trace.snapshots) {
    const auto& st = snap.state;
    const double tail = 1.0 / std::sqrt(omega_hat - st.t);
    double local = 0.0;
    const auto& r = st.grid.nodes();
    for (std::size_t i = 1; i < r.size(); ++i)
      local = std::max(local, std::abs(st.theta_r[i]) / (1.0 / r[i] + tail));
    fit.times.push_back(st.t);
    fit.margin.push_back(local);
    fit.C0 = std::max(fit.C0, local);
  }
  return fit;
}

double gradient_bound_fit_eternal(const FlowTrace& trace) {
  double C = 0.0;
  const double R = trace.params.R;
  for (const auto& snap : trace.snapshots) {
    const auto& st = snap.state;
    const auto& r = st.grid.nodes();
    for (std::size_t i = 1; i + 1 < r.size(); ++i)
      C = std::max(C, std::abs(st.theta_r[i]) / (1.0 + 1.0 / r[i] + 1.0 / (R - r[i])));
  }
  return C;
}

DissipationAudit energy_dissipation_audit(const FlowTrace& trace, double tol) {
  if (trace.snapshots.size() < 2)
    throw std::invalid_argument("energy_dissipation_audit: need at least 2 snapshots");
  DissipationAudit audit;
  audit.initial_energy = trace.initial_energy;

  // Snapshot energies via the model quadrature; dissipation from the per-step
  // accumulation recorded by the stepper.
  std::vector<double> E(trace.snapshots.size());
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k)
    E[k] = dirichlet_energy(trace.snapshots[k].state, trace.params);

  for (std::size_t k = 0; k + 1 < trace.snapshots.size(); ++k) {
    const double dE = E[k + 1] - E[k];
    const double dD =
        trace.snapshots[k + 1].cum_dissipation - trace.snapshots[k].cum_dissipation;
    const double defect = std::abs(dE + dD);
    audit.t_left.push_back(trace.snapshots[k].state.t);
    audit.t_right.push_back(trace.snapshots[k + 1].state.t);
    audit.defect.push_back(defect);
    const double floor = 1e-12 * std::max(audit.initial_energy, 1e-300);
    audit.relative_defect.push_back(defect / std::max(std::abs(dE), floor));
  }
  audit.cumulative_dissipation = trace.snapshots.back().cum_dissipation;
  audit.cumulative_bounded =
      audit.cumulative_dissipation <= audit.initial_energy * (1.0 + tol) + 1e-14;
  return audit;
}

}  // namespace hmflow
