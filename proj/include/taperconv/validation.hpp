#pragma once

#include "taperconv/config.hpp"

#include <string>
#include <vector>

namespace taperconv {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

// Invariant suite over the configured dispersion model (default calibration
// for a minimal config). Checks that do not apply to the model kind, such as
// exact linearity of a tabulated model, are skipped.
std::vector<CheckResult> run_validation(const RunConfig& config);

} // namespace taperconv
