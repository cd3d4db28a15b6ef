// Command-line front end: run scenarios, sweep parameters, check locomotion
// data files, and run the acceptance suite.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rollsim/acceptance.hpp"
#include "rollsim/locomotion.hpp"
#include "rollsim/scenario.hpp"

namespace {

int cmd_run(const std::string& file, const std::string& out) {
  const rollsim::Scenario sc = rollsim::Scenario::parse_file(file);
  const auto dir = rollsim::resolve_out_dir(out);
  const rollsim::RunArtifacts art = rollsim::run_scenario(sc, dir);
  std::cout << "wrote " << art.csv.string() << "\n"
            << "wrote " << art.report.string() << "\n"
            << "wrote " << art.kv.string() << "\n"
            << "wrote " << art.plot.string() << "\n";
  if (art.trajectory.aborted) {
    std::cerr << "simulation aborted: " << art.trajectory.abort_reason << "\n";
    return 2;
  }
  return 0;
}

int cmd_sweep(const std::string& file, const std::string& param,
              const std::vector<double>& values, const std::string& out) {
  const rollsim::Scenario sc = rollsim::Scenario::parse_file(file);
  const auto dir = rollsim::resolve_out_dir(out);
  const rollsim::SweepResult result = rollsim::run_sweep(sc, param, values, dir);
  for (const auto& run : result.runs) std::cout << "wrote " << run.csv.string() << "\n";
  std::cout << "wrote " << result.combined_report.string() << "\n";
  return 0;
}

int cmd_check(const std::string& file) {
  const rollsim::LocomotionData data = rollsim::load_locomotion_data(file);
  data.geometry.validate();
  int violations = 0;
  for (const auto& seq : data.sequences) {
    for (const auto& v : rollsim::validate_sequence(seq)) {
      std::cout << "violation: " << v << "\n";
      ++violations;
    }
  }
  std::cout << data.sequences.size() << " sequences, " << violations << " violations\n";
  return violations == 0 ? 0 : 1;
}

int cmd_acceptance(const std::string& data_dir) {
  std::string dir = data_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("ROLLSIM_DATA"); env && *env)
      dir = env;
    else
      dir = "data";
  }
  const rollsim::AcceptanceOutcome outcome = rollsim::run_acceptance(dir, std::cout);
  return outcome.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rollsim: planar core-in-tube rolling sphere simulator"};
  app.require_subcommand(1);

  std::string scenario_file, out_dir, param, data_dir, check_file;
  std::vector<double> values;

  auto* run = app.add_subcommand("run", "run one scenario file and write its artifacts");
  run->add_option("file", scenario_file, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory (default: $ROLLSIM_OUT or rollsim_out)");

  auto* sweep = app.add_subcommand("sweep", "run a scenario once per parameter value");
  sweep->add_option("file", scenario_file, "base scenario file")->required();
  sweep->add_option("--param", param, "parameter name (tau|zeta|dt|mc|Ms|R|r|g|t_end)")
      ->required();
  sweep->add_option("--values", values, "list of values")->required()->delimiter(',');
  sweep->add_option("--out", out_dir, "output directory");

  auto* check = app.add_subcommand("check", "validate a locomotion data file");
  check->add_option("file", check_file, "locomotion data file")->required();

  auto* acceptance = app.add_subcommand("acceptance", "run the acceptance suite");
  acceptance->add_option("--data", data_dir, "data directory (default: $ROLLSIM_DATA or data)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_file, out_dir);
    if (sweep->parsed()) return cmd_sweep(scenario_file, param, values, out_dir);
    if (check->parsed()) return cmd_check(check_file);
    if (acceptance->parsed()) return cmd_acceptance(data_dir);
  } catch (const rollsim::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
