#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace magnus::acceptance {

struct Outcome {
  std::string id;
  bool pass = false;
  std::string summary;
  double seconds = 0;
};

const std::vector<std::string>& criterion_ids();

// Runs one criterion, writing its measurements to `log`. Throws
// std::invalid_argument for an unknown id.
Outcome run_criterion(const std::string& id, std::ostream& log);

// Runs the selected criteria (all when empty) and prints one PASS/FAIL line
// for each. Returns the number of failures.
int run_all(std::ostream& out, const std::vector<std::string>& only = {});

}  // namespace magnus::acceptance
