#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rollsim/analysis.hpp"
#include "rollsim/integrate.hpp"

namespace rollsim {

// Analysis requests carried by a scenario.
struct AnalysisRequest {
  Channel ripple_channel = Channel::theta_dot;
  double ripple_window_start = 2.0;
  double ripple_window_end = 10.0;
  Channel settle_channel = Channel::gamma_dot;
  double settle_threshold = 0.01;
  Channel waving_channel = Channel::theta_dot;
  double waving_window_start = 2.0;
};

// A complete simulation experiment: parameters, model choice, input torque,
// integration setup, analysis requests and output naming.
struct Scenario {
  std::string name = "scenario";
  RobotParams params;
  SimConfig sim;
  TorqueProfile torque;
  AnalysisRequest analysis;
  std::string csv_name;      // default: <name>.csv
  std::string report_name;   // default: <name>_report.txt
  std::string kv_name;       // default: <name>_report.kv
  std::string plot_name;     // default: <name>_plot.py

  static Scenario parse_text(const std::string& text, const std::string& source_name = "");
  static Scenario parse_file(const std::string& path);
  std::string serialize() const;

  void validate() const;  // semantic checks beyond parsing
};

// Fixed CSV schema, 17 significant digits, '.' decimal, LF endings.
extern const char* const kCsvHeader;
void write_csv(const Trajectory& traj, std::ostream& out);
std::string csv_string(const Trajectory& traj);

// Analysis results computed for one run.
struct RunAnalysis {
  RippleStats ripple;
  std::optional<double> settle;
  bool waving = false;
};

RunAnalysis analyze(const Trajectory& traj, const AnalysisRequest& req);

std::string render_run_report_text(const Scenario& sc, const Trajectory& traj,
                                   const RunAnalysis& an);
std::string render_run_report_kv(const Scenario& sc, const Trajectory& traj,
                                 const RunAnalysis& an);

// Plot script reproducing the displacement/velocity panel layout from the CSV.
std::string plot_script(const Scenario& sc, const std::string& csv_file);

struct RunArtifacts {
  std::filesystem::path csv, report, kv, plot;
  Trajectory trajectory;
  RunAnalysis analysis;
};

// Runs the scenario and writes csv/report/kv/plot under out_dir (created if
// missing). Output is deterministic for identical inputs.
RunArtifacts run_scenario(const Scenario& sc, const std::filesystem::path& out_dir);

// Sweepable scalar parameters.
// Recognized names: tau, zeta, dt, mc, Ms, R, r, g, t_end.
Scenario apply_sweep_value(const Scenario& base, const std::string& param, double value);

struct SweepResult {
  std::vector<RunArtifacts> runs;
  std::vector<double> values;
  std::string param;
  std::filesystem::path combined_report;
};

SweepResult run_sweep(const Scenario& base, const std::string& param,
                      const std::vector<double>& values, const std::filesystem::path& out_dir);

// Output directory resolution: explicit argument, else ROLLSIM_OUT, else
// "rollsim_out" under the current directory.
std::filesystem::path resolve_out_dir(const std::string& cli_value);

}  // namespace rollsim
