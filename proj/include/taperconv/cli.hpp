#pragma once

#include <iosfwd>
#include <string>

namespace taperconv {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitConfigError = 2,
  kExitRuntimeError = 3,
};

struct CliRequest {
  std::string command;     // propagate | spectrum | sweep | area-law | phase-match | validate
  std::string config_path; // "-" reads stdin
  std::string out_path;    // empty writes to `out`
  std::string format = "csv";
};

// Runs one subcommand; errors are reported on `err` and mapped to exit codes.
int run_cli(const CliRequest& request, std::ostream& out, std::ostream& err);

} // namespace taperconv
