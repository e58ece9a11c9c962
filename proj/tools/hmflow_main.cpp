// Command-line front end: shoot | flow | classify | selfsim | sweep | report |
// thresholds.  Exit codes: 0 success, 2 assertion failure, 3 solver failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmflow/blowup.hpp"
#include "hmflow/csvio.hpp"
#include "hmflow/diagnostics.hpp"
#include "hmflow/errors.hpp"
#include "hmflow/harness.hpp"
#include "hmflow/selfsim.hpp"
#include "hmflow/steady.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hmflow;

namespace {

Scenario resolve_scenario(const std::string& config_path, const std::string& preset_name,
                          const std::vector<std::string>& overrides) {
  Scenario sc;
  if (!preset_name.empty())
    sc = preset(preset_name);
  else if (!config_path.empty())
    sc = scenario_from_config(config_path);
  else
    throw std::invalid_argument("need --config or --preset");
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("override without '=': " + ov);
    apply_config_line(sc, ov.substr(0, eq), ov.substr(eq + 1));
  }
  return sc;
}

void write_profile_files(const SteadyProfile& prof, const std::string& out_prefix) {
  CsvWriter csv(out_prefix + ".csv");
  csv.row({"r", "phi", "dphi"});
  for (std::size_t i = 0; i < prof.r_samples.size(); ++i)
    csv.row({CsvWriter::num(prof.r_samples[i]), CsvWriter::num(prof.phi_samples[i]),
             CsvWriter::num(prof.dphi_samples[i])});
  json j;
  j["m"] = prof.m;
  j["a"] = prof.a;
  j["r_max"] = prof.r_max;
  j["ode_tol"] = prof.ode_tol;
  json ex = json::array();
  for (auto& [r, w] : prof.extrema) ex.push_back({{"r", r}, {"omega", w}});
  j["extrema"] = ex;
  if (!prof.extrema.empty()) j["first_max"] = prof.extrema.front().second;
  std::ofstream jf(out_prefix + ".json", std::ios::binary);
  jf << j.dump(2) << "\n";
}

int cmd_thresholds(const std::string& out) {
  json study;
  study["description"] =
      "Reference values of the oscillation threshold (first maximum of the "
      "unit-slope steady profile) with the tolerance sweep that produced them.";
  study["tool_version"] = kToolVersion;
  json values = json::object();
  for (int m = 3; m <= 6; ++m) {
    json entry;
    entry["theta_m"] = theta_threshold(m, 1e-11);
    json sweep = json::array();
    for (double tol : {1e-7, 1e-8, 1e-9, 1e-10, 1e-11}) {
      sweep.push_back({{"tol", tol}, {"value", theta_threshold(m, tol)}});
    }
    entry["tolerance_sweep"] = sweep;
    entry["scaling_check_a10"] =
        shoot_profile_with_extrema(m, 10.0, 1, 1e-11).extrema.front().second;
    values["m" + std::to_string(m)] = entry;
  }
  study["values"] = values;
  if (out.empty()) {
    std::cout << study.dump(2) << "\n";
  } else {
    std::ofstream f(out, std::ios::binary);
    f << study.dump(2) << "\n";
  }
  return 0;
}

int cmd_report(const std::string& run_dir, const std::string& out) {
  // long-format CSV from a persisted run: series,x,y
  const fs::path mon = fs::path(run_dir) / "monitors.csv";
  std::ifstream in(mon);
  if (!in) throw std::runtime_error("no monitors.csv under " + run_dir);
  std::string header;
  std::getline(in, header);
  while (!header.empty() && (header.back() == '\r' || header.back() == '\n')) header.pop_back();
  std::vector<std::string> cols;
  {
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  CsvWriter csv(out.empty() ? (fs::path(run_dir) / "report_long.csv").string() : out);
  csv.row({"series", "x", "y"});
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> f;
    std::string c;
    while (std::getline(ss, c, ',')) f.push_back(c);
    for (std::size_t k = 1; k < f.size() && k < cols.size(); ++k)
      csv.row({cols[k], f[0], f[k]});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivariant harmonic map heat flow laboratory"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir = "runs", out_file;
  std::vector<std::string> overrides;
  int jobs = 1;
  unsigned long long seed = 0;
  app.add_option("--config", config_path, "scenario config file (key = value)");
  app.add_option("--preset", preset_name, "preset scenario name");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "worker threads for sweeps");
  app.add_option("--seed", seed, "seed for randomized suites");
  app.add_option("--set", overrides, "config overrides key=value");

  auto* shoot = app.add_subcommand("shoot", "integrate a steady profile");
  int sh_m = 3;
  double sh_a = 1.0, sh_rmax = 50.0, sh_tol = 1e-10;
  int sh_K = 0;
  shoot->add_option("--m", sh_m, "dimension");
  shoot->add_option("--a", sh_a, "origin slope");
  shoot->add_option("--rmax", sh_rmax, "integration horizon");
  shoot->add_option("--tol", sh_tol, "ODE tolerance");
  shoot->add_option("--extrema", sh_K, "grow horizon until K extrema");

  auto* flow = app.add_subcommand("flow", "run a flow scenario and persist artifacts");
  auto* classify = app.add_subcommand("classify", "run a scenario and classify its blowup");
  auto* selfsim = app.add_subcommand("selfsim", "self-similar energy trace of a blowup run");
  double ss_delta = 0.0, ss_kappa = 1.5, ss_lambda = 9.0;
  selfsim->add_option("--delta", ss_delta, "cutoff radius (default R/2)");
  selfsim->add_option("--kappa", ss_kappa, "quasi-monotonicity kappa > 1");
  selfsim->add_option("--lambda", ss_lambda, "weighted-energy lambda > 8");

  auto* sweep = app.add_subcommand("sweep", "boundary-angle outcome map");
  int sw_m = 3;
  std::string sw_b = "0.5,1.0,1.5,2.0,2.5,3.0";
  double sw_tend = 20.0;
  sweep->add_option("--m", sw_m, "dimension");
  sweep->add_option("--b", sw_b, "comma-separated boundary angles");
  sweep->add_option("--t-end", sw_tend, "per-run time horizon");

  auto* report = app.add_subcommand("report", "emit plot-ready long-format CSV for a run");
  std::string rp_run;
  report->add_option("--run", rp_run, "run directory (runs/<hash>)")->required();

  auto* thresholds = app.add_subcommand("thresholds", "threshold reference study JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (shoot->parsed()) {
      SteadyProfile prof = (sh_K > 0) ? shoot_profile_with_extrema(sh_m, sh_a, sh_K, sh_tol)
                                      : shoot_profile(sh_m, sh_a, sh_rmax, sh_tol);
      fs::create_directories(out_dir);
      std::ostringstream prefix;
      prefix << out_dir << "/profile_m" << sh_m << "_a" << format_double(sh_a);
      write_profile_files(prof, prefix.str());
      std::cout << "profile written to " << prefix.str() << ".{csv,json}";
      if (!prof.extrema.empty())
        std::cout << "  first max " << format_double(prof.extrema.front().second) << " at r="
                  << format_double(prof.extrema.front().first);
      std::cout << "\n";
      return 0;
    }
    if (flow->parsed()) {
      const Scenario sc = resolve_scenario(config_path, preset_name, overrides);
      const RunManifest man = run_scenario(sc, out_dir);
      std::cout << "run " << man.input_hash << " stop=" << man.stop_reason
                << " expected_match=" << (man.expected_match ? "yes" : "no") << "\n";
      return man.stop_reason.rfind("error:", 0) == 0 ? 3 : 0;
    }
    if (classify->parsed() || selfsim->parsed()) {
      const Scenario sc = resolve_scenario(config_path, preset_name, overrides);
      FlowTrace trace = run_flow(sc.params, sc.config, sc.stop);
      const auto est = estimate_blowup_time(trace);
      fs::create_directories(out_dir);
      if (classify->parsed()) {
        const BlowupReport rep = classify_rate(trace, est);
        json j;
        j["omega_hat"] = rep.omega_hat;
        j["fit_residual"] = rep.fit_residual;
        j["classification"] = to_string(rep.classification);
        j["q_ratio_final_decades"] = rep.q_ratio_final_decades;
        std::ofstream f(fs::path(out_dir) / "classify.json", std::ios::binary);
        f << j.dump(2) << "\n";
        std::cout << "classification " << to_string(rep.classification) << " omega_hat "
                  << format_double(rep.omega_hat) << "\n";
      } else {
        const double delta = (ss_delta > 0.0) ? ss_delta : 0.5 * sc.params.R;
        const EnergyTrace et = energy_trace(trace, est.omega_hat, delta);
        CsvWriter csv((fs::path(out_dir) / "energy_trace.csv").string());
        csv.row({"s", "E", "Etilde"});
        for (std::size_t k = 0; k < et.s.size(); ++k)
          csv.row({CsvWriter::num(et.s[k]), CsvWriter::num(et.E[k]),
                   CsvWriter::num(et.Etilde[k])});
        const MonotonicityReport rep = monotonicity_report(et, ss_kappa, ss_lambda);
        json j;
        j["kappa"] = rep.kappa;
        j["lambda"] = rep.lambda;
        j["fitted_C_energy"] = rep.fitted_C_energy;
        j["worst_raw_defect_energy"] = rep.worst_raw_defect_energy;
        j["defect_after_fit_energy"] = rep.defect_after_fit_energy;
        j["fitted_C_weighted"] = rep.fitted_C_weighted;
        j["worst_raw_defect_weighted"] = rep.worst_raw_defect_weighted;
        j["defect_after_fit_weighted"] = rep.defect_after_fit_weighted;
        j["dissipation_sum"] = rep.dissipation_sum;
        j["fitted_C_dissipation"] = rep.fitted_C_dissipation;
        j["note"] =
            "constants are fitted artifacts; the flat-metric specialization has no "
            "metric-correction terms";
        std::ofstream f(fs::path(out_dir) / "monotonicity.json", std::ios::binary);
        f << j.dump(2) << "\n";
        std::cout << "energy trace with " << et.s.size() << " frames written\n";
      }
      return 0;
    }
    if (sweep->parsed()) {
      std::vector<double> bs;
      std::stringstream ss(sw_b);
      std::string tok;
      while (std::getline(ss, tok, ',')) bs.push_back(std::stod(tok));
      TimeStepperConfig cfg;
      const SweepResult res =
          sweep_boundary_map(sw_m, bs, InitialData::Linear, jobs, cfg, sw_tend);
      fs::create_directories(out_dir);
      write_sweep_csv(res, (fs::path(out_dir) / "sweep.csv").string());
      std::cout << "bracket [" << format_double(res.b_global_max) << ", "
                << format_double(res.b_blowup_min) << "], pi/2=" << format_double(res.half_pi)
                << " theta_m=" << format_double(res.theta_m) << "\n";
      return 0;
    }
    if (report->parsed()) return cmd_report(rp_run, out_file);
    if (thresholds->parsed()) return cmd_thresholds(out_file);
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
