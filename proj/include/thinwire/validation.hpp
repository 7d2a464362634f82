#pragma once

// Self-check suite behind `thinwire validate`: closed-form constants,
// asymptotic rates, symmetry and consistency properties of every module.

#include <cstdint>
#include <string>
#include <vector>

namespace thinwire {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      ///< measured quantity
  double tolerance = 0.0;  ///< bound it is compared with
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 1;
  int grid_n = 24;  ///< collocation grid for the homogenization check
};

std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

}  // namespace thinwire
