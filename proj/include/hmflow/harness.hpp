#ifndef HMFLOW_HARNESS_HPP
#define HMFLOW_HARNESS_HPP

#include <string>
#include <vector>

#include "hmflow/pde.hpp"

namespace hmflow {

inline constexpr const char* kToolVersion = "0.1.0";

// A named experiment: flow parameters, stepper configuration, stop rule and
// the outcome the parameter region predicts.
struct Scenario {
  std::string name = "custom";
  FlowParams params;
  TimeStepperConfig config;
  StopRule stop;
  std::string expected = "Unspecified";  // Blowup-TypeI | GlobalExistence | Unspecified
  bool diagnostics = true;
};

std::vector<std::string> preset_names();
Scenario preset(const std::string& name);

// Key = value configuration file (one pair per line, '#' comments); keys are
// documented in the README.  Unknown keys are an error.
Scenario scenario_from_config(const std::string& path);
void apply_config_line(Scenario& sc, const std::string& key, const std::string& value);

// Canonical serialization of the scenario inputs and its FNV-1a hash (the run
// directory name).
std::string scenario_canonical(const Scenario& sc);
std::string content_hash(const std::string& payload);

struct RunManifest {
  std::string scenario;
  std::string input_hash;
  std::string tool_version;
  std::string stop_reason;   // run outcome or "error: ..."
  std::string expected;
  bool expected_match = true;
  std::vector<std::string> outputs;  // files under the run directory
  double wall_time_s = 0.0;          // written to timing.json, not hashed
};

// Executes the flow and the diagnostics pipeline for the scenario's expected
// tag; writes runs/<hash>/{manifest.json, monitors.csv, snapshots/, reports/}.
// Solver errors are folded into the manifest instead of propagating.
RunManifest run_scenario(const Scenario& sc, const std::string& out_root);

struct SweepRow {
  double b = 0.0;
  std::string outcome;  // global | blowup | timeout | error:...
  double omega_hat = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double b_global_max = 0.0;  // largest b that settled
  double b_blowup_min = 0.0;  // smallest b that blew up
  double theta_m = 0.0;       // reference threshold for this m
  double half_pi = 0.0;
};

SweepResult sweep_boundary_map(int m, const std::vector<double>& b_grid,
                               InitialData family, int jobs,
                               const TimeStepperConfig& config, double t_end = 20.0);

void write_sweep_csv(const SweepResult& res, const std::string& path);

}  // namespace hmflow

#endif
