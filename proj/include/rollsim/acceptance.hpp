#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace rollsim {

// One acceptance criterion outcome; details carry the measured numbers.
struct CriterionResult {
  int number = 0;
  std::string name;
  bool passed = false;
  std::vector<std::string> details;
};

struct AcceptanceOutcome {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
};

// Runs the full acceptance suite against the shipped data files (scenarios and
// locomotion data under data_dir) and prints one pass/fail line per criterion
// to `log`. Pure in-memory evaluation; writes nothing.
AcceptanceOutcome run_acceptance(const std::filesystem::path& data_dir, std::ostream& log);

}  // namespace rollsim
