#include "hmflow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hmflow/blowup.hpp"
#include "hmflow/csvio.hpp"
#include "hmflow/diagnostics.hpp"
#include "hmflow/errors.hpp"
#include "hmflow/selfsim.hpp"
#include "hmflow/steady.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace hmflow {

std::vector<std::string> preset_names() {
  return {"global-m3", "blowup-m3", "sphere-degree2-m3", "surface-blowup-m2",
          "steady-hold-m3"};
}

Scenario preset(const std::string& name) {
  Scenario sc;
  sc.name = name;
  if (name == "global-m3") {
    sc.params = {3, 1.0, 1.0, Metric::Flat, InitialData::Linear};
    sc.stop.t_end = 10.0;
    sc.expected = "GlobalExistence";
  } else if (name == "blowup-m3") {
    sc.params = {3, 1.0, 3.0, Metric::Flat, InitialData::Linear};
    sc.stop.t_end = 5.0;
    sc.expected = "Blowup-TypeI";
  } else if (name == "sphere-degree2-m3") {
    sc.params = {3, 1.0, M_PI, Metric::SphereStereographic, InitialData::SuperHarmonic};
    sc.params.profile_slope = 0.0;  // auto: argmax radius of the unit-slope profile
    sc.config.scheme = Scheme::IMEX1;  // order-preserving; keeps theta_t >= 0 exactly
    sc.stop.t_end = 5.0;
    sc.expected = "Blowup-TypeI";
  } else if (name == "surface-blowup-m2") {
    sc.params = {2, 1.0, 3.5, Metric::Flat, InitialData::Linear};
    sc.stop.t_end = 5.0;
    sc.expected = "Unspecified";
  } else if (name == "steady-hold-m3") {
    sc.params = {3, 1.0, 0.0, Metric::Flat, InitialData::Profile};
    sc.params.profile_slope = 1.0;
    sc.params.b = -1.0;  // resolved to the profile boundary value below
    sc.config.base_intervals = 2048;
    sc.stop.t_end = 1.0;
    sc.stop.eta_steady = 0.0;  // hold for the full window
    sc.expected = "GlobalExistence";
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  if (sc.name == "steady-hold-m3") {
    SteadyProfile prof = shoot_profile(sc.params.m, sc.params.profile_slope, sc.params.R, 1e-11);
    sc.params.b = prof.eval(sc.params.R);
  }
  return sc;
}

namespace {

Metric parse_metric(const std::string& v) {
  if (v == "flat") return Metric::Flat;
  if (v == "sphere") return Metric::SphereStereographic;
  throw std::invalid_argument("metric must be flat|sphere, got " + v);
}

InitialData parse_data(const std::string& v) {
  if (v == "linear") return InitialData::Linear;
  if (v == "profile") return InitialData::Profile;
  if (v == "superharmonic") return InitialData::SuperHarmonic;
  if (v == "tabulated") return InitialData::Tabulated;
  throw std::invalid_argument("data must be linear|profile|superharmonic|tabulated");
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void apply_config_line(Scenario& sc, const std::string& key, const std::string& value) {
  if (key == "name") sc.name = value;
  else if (key == "m") sc.params.m = std::stoi(value);
  else if (key == "R") sc.params.R = std::stod(value);
  else if (key == "b") sc.params.b = (value == "pi") ? M_PI : std::stod(value);
  else if (key == "metric") sc.params.metric = parse_metric(value);
  else if (key == "data") sc.params.initial_data = parse_data(value);
  else if (key == "profile_slope") sc.params.profile_slope = std::stod(value);
  else if (key == "scheme") sc.config.scheme = (value == "imex1") ? Scheme::IMEX1 : Scheme::IMEX2;
  else if (key == "dt_init") sc.config.dt_init = std::stod(value);
  else if (key == "err_tol") sc.config.err_tol = std::stod(value);
  else if (key == "base_intervals") sc.config.base_intervals = std::stoi(value);
  else if (key == "base_depth") sc.config.base_depth = std::stoi(value);
  else if (key == "p_min") sc.config.p_min = std::stoi(value);
  else if (key == "max_depth") sc.config.max_depth = std::stoi(value);
  else if (key == "t_end") sc.stop.t_end = std::stod(value);
  else if (key == "m_stop") sc.stop.m_stop = std::stod(value);
  else if (key == "eta_steady") sc.stop.eta_steady = std::stod(value);
  else if (key == "expected") sc.expected = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

Scenario scenario_from_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  Scenario sc;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line without '=': " + line);
    apply_config_line(sc, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return sc;
}

std::string scenario_canonical(const Scenario& sc) {
  std::ostringstream os;
  os << "name=" << sc.name << ";m=" << sc.params.m << ";R=" << format_double(sc.params.R)
     << ";b=" << format_double(sc.params.b) << ";metric=" << to_string(sc.params.metric)
     << ";data=" << to_string(sc.params.initial_data)
     << ";profile_slope=" << format_double(sc.params.profile_slope)
     << ";scheme=" << to_string(sc.config.scheme)
     << ";dt_init=" << format_double(sc.config.dt_init)
     << ";err_tol=" << format_double(sc.config.err_tol)
     << ";base_intervals=" << sc.config.base_intervals
     << ";base_depth=" << sc.config.base_depth << ";p_min=" << sc.config.p_min
     << ";max_depth=" << sc.config.max_depth << ";t_end=" << format_double(sc.stop.t_end)
     << ";m_stop=" << format_double(sc.stop.m_stop)
     << ";eta_steady=" << format_double(sc.stop.eta_steady) << ";expected=" << sc.expected
     << ";version=" << kToolVersion;
  return os.str();
}

std::string content_hash(const std::string& payload) {
  // FNV-1a, 64 bit
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return buf;
}

namespace {

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
}

void write_monitors_csv(const fs::path& path, const FlowTrace& trace) {
  CsvWriter csv(path.string());
  csv.row({"t", "dt", "grad_sup", "slope_origin", "energy", "density_sup", "theta_t_sup",
           "cum_dissipation", "depth"});
  for (const auto& ms : trace.monitors)
    csv.row({CsvWriter::num(ms.t), CsvWriter::num(ms.dt), CsvWriter::num(ms.grad_sup),
             CsvWriter::num(ms.slope_origin), CsvWriter::num(ms.energy),
             CsvWriter::num(ms.density_sup), CsvWriter::num(ms.theta_t_sup),
             CsvWriter::num(ms.cum_dissipation), CsvWriter::num((long long)ms.depth)});
}

std::vector<std::string> write_snapshots(const fs::path& dir, const FlowTrace& trace) {
  fs::create_directories(dir);
  std::vector<std::string> files;
  json index = json::array();
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%05zu.csv", k);
    CsvWriter csv((dir / name).string());
    csv.row({"r", "theta", "theta_r"});
    const auto& st = trace.snapshots[k].state;
    for (std::size_t i = 0; i < st.grid.size(); ++i)
      csv.row({CsvWriter::num(st.grid.node(i)), CsvWriter::num(st.theta[i]),
               CsvWriter::num(st.theta_r[i])});
    files.push_back(std::string("snapshots/") + name);
    index.push_back({{"cum_dissipation", trace.snapshots[k].cum_dissipation},
                     {"file", name},
                     {"t", trace.snapshots[k].state.t}});
  }
  write_json(dir / "index.json", index);
  files.push_back("snapshots/index.json");
  return files;
}

json blowup_report_json(const BlowupReport& rep) {
  json j;
  j["omega_hat"] = rep.omega_hat;
  j["fit_residual"] = rep.fit_residual;
  j["classification"] = to_string(rep.classification);
  j["classification_ratio5"] = to_string(rep.class_at_ratio5);
  j["classification_ratio20"] = to_string(rep.class_at_ratio20);
  j["q_ratio_final_decades"] = rep.q_ratio_final_decades;
  if (rep.bubble_error >= 0.0) j["bubble_error"] = rep.bubble_error;
  return j;
}

}  // namespace

RunManifest run_scenario(const Scenario& sc, const std::string& out_root) {
  RunManifest man;
  man.scenario = sc.name;
  man.tool_version = kToolVersion;
  man.expected = sc.expected;
  man.input_hash = content_hash(scenario_canonical(sc));

  const fs::path run_dir = fs::path(out_root) / man.input_hash;
  fs::create_directories(run_dir);

  const auto t0 = std::chrono::steady_clock::now();
  FlowTrace trace;
  bool ran = false;
  try {
    trace = run_flow(sc.params, sc.config, sc.stop);
    man.stop_reason = to_string(trace.stop_reason);
    ran = true;
  } catch (const SolverError& e) {
    man.stop_reason = std::string("error: ") + e.what();
  }

  if (ran && trace.stop_reason != StopReason::Degenerate) {
    write_monitors_csv(run_dir / "monitors.csv", trace);
    man.outputs.push_back("monitors.csv");
    for (auto& f : write_snapshots(run_dir / "snapshots", trace)) man.outputs.push_back(f);

    if (sc.diagnostics) {
      fs::create_directories(run_dir / "reports");
      json diag;
      diag["initial_energy"] = trace.initial_energy;
      diag["final_energy"] = trace.monitors.back().energy;
      const auto audit = energy_dissipation_audit(trace);
      diag["cumulative_dissipation"] = audit.cumulative_dissipation;
      diag["cumulative_bounded"] = audit.cumulative_bounded;
      double worst = 0.0;
      for (double d : audit.relative_defect) worst = std::max(worst, d);
      diag["worst_relative_defect"] = worst;
      const auto slopes = origin_slope_series(trace);
      diag["slope_tail"] = (slopes.tail == TailDirection::Increasing  ? "increasing"
                            : slopes.tail == TailDirection::Decreasing ? "decreasing"
                            : slopes.tail == TailDirection::Constant   ? "constant"
                                                                       : "none");
      if (trace.stop_reason == StopReason::BlowupThreshold) {
        try {
          const auto est = estimate_blowup_time(trace);
          BlowupReport rep = classify_rate(trace, est);
          if (sc.params.m >= 3 && sc.params.m < 7) {
            SteadyProfile bubble = shoot_profile(sc.params.m, 1.0, 8.0, 1e-10);
            try {
              rep.bubble_error = rescaled_profile_compare(trace.last_state(), bubble);
            } catch (const SlopeTooSmall&) {
            }
          }
          write_json(run_dir / "reports" / "blowup.json", blowup_report_json(rep));
          man.outputs.push_back("reports/blowup.json");
          CsvWriter q((run_dir / "reports" / "q_series.csv").string());
          q.row({"t", "Q"});
          for (auto& [t, Q] : rep.Q_series) q.row({CsvWriter::num(t), CsvWriter::num(Q)});
          man.outputs.push_back("reports/q_series.csv");
          // intersection count against the constant equator map
          const auto zs = intersection_series(
              trace, [](double) { return 0.5 * M_PI; });
          CsvWriter zc((run_dir / "reports" / "intersections.csv").string());
          zc.row({"t", "count"});
          for (std::size_t k = 0; k < zs.times.size(); ++k)
            zc.row({CsvWriter::num(zs.times[k]), CsvWriter::num((long long)zs.counts[k])});
          man.outputs.push_back("reports/intersections.csv");
          diag["intersection_non_increasing"] = zs.non_increasing;
          man.expected_match =
              (sc.expected != "Blowup-TypeI") || rep.classification == RateClass::TypeI;
        } catch (const SolverError& e) {
          diag["blowup_estimate_error"] = e.what();
          man.expected_match = sc.expected != "Blowup-TypeI";
        }
      } else {
        diag["eternal_gradient_constant"] = gradient_bound_fit_eternal(trace);
        if (sc.expected == "GlobalExistence")
          man.expected_match = trace.stop_reason == StopReason::Steady ||
                               trace.stop_reason == StopReason::TimeEnd;
      }
      if (sc.expected == "Blowup-TypeI" && trace.stop_reason != StopReason::BlowupThreshold)
        man.expected_match = false;
      write_json(run_dir / "reports" / "diagnostics.json", diag);
      man.outputs.push_back("reports/diagnostics.json");
    }
  }

  std::sort(man.outputs.begin(), man.outputs.end());
  man.outputs.insert(man.outputs.begin(), "manifest.json");

  json mj;
  mj["scenario"] = man.scenario;
  mj["input_hash"] = man.input_hash;
  mj["tool_version"] = man.tool_version;
  mj["inputs"] = scenario_canonical(sc);
  mj["stop_reason"] = man.stop_reason;
  mj["expected"] = man.expected;
  mj["expected_match"] = man.expected_match;
  mj["outputs"] = man.outputs;
  write_json(run_dir / "manifest.json", mj);

  const auto t1 = std::chrono::steady_clock::now();
  man.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  json timing;
  timing["wall_time_s"] = man.wall_time_s;
  write_json(run_dir / "timing.json", timing);  // not part of the inventory
  return man;
}

SweepResult sweep_boundary_map(int m, const std::vector<double>& b_grid, InitialData family,
                               int jobs, const TimeStepperConfig& config, double t_end) {
  SweepResult res;
  res.rows.resize(b_grid.size());
  res.half_pi = 0.5 * M_PI;
  res.theta_m = (m >= 3 && m < 7) ? theta_threshold(m, 1e-9) : 0.0;

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= b_grid.size()) return;
      SweepRow row;
      row.b = b_grid[i];
      FlowParams p{m, 1.0, b_grid[i], Metric::Flat, family};
      StopRule stop;
      stop.t_end = t_end;
      try {
        FlowTrace trace = run_flow(p, config, stop);
        switch (trace.stop_reason) {
          case StopReason::Steady: row.outcome = "global"; break;
          case StopReason::BlowupThreshold: {
            row.outcome = "blowup";
            try {
              row.omega_hat = estimate_blowup_time(trace).omega_hat;
            } catch (const SolverError&) {
            }
            break;
          }
          default: row.outcome = "timeout"; break;
        }
      } catch (const SolverError& e) {
        row.outcome = std::string("error: ") + e.what();
      }
      res.rows[i] = row;
    }
  };
  const int nt = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int k = 0; k < nt; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  res.b_global_max = 0.0;
  res.b_blowup_min = 0.0;
  for (const auto& row : res.rows) {
    if (row.outcome == "global") res.b_global_max = std::max(res.b_global_max, row.b);
    if (row.outcome == "blowup")
      res.b_blowup_min = (res.b_blowup_min == 0.0) ? row.b : std::min(res.b_blowup_min, row.b);
  }
  return res;
}

void write_sweep_csv(const SweepResult& res, const std::string& path) {
  CsvWriter csv(path);
  csv.row({"b", "outcome", "omega_hat"});
  for (const auto& row : res.rows)
    csv.row({CsvWriter::num(row.b), row.outcome, CsvWriter::num(row.omega_hat)});
}

}  // namespace hmflow
