#include "taperconv/cli.hpp"
#include "taperconv/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Frequency-conversion efficiency in width-engineered waveguides"};
  app.set_version_flag("--version", std::string(taperconv::version()));
  app.require_subcommand(1, 1);

  taperconv::CliRequest req;
  const std::pair<const char*, const char*> commands[] = {
      {"propagate", "Transfer matrix and efficiency at one idler wavelength"},
      {"spectrum", "Efficiency spectrum with FWHM, area and peaks"},
      {"sweep", "Parameter sweep as configured in the sweep section"},
      {"area-law", "Integrated spectral area versus delta_w against the analytic value"},
      {"phase-match", "Phase-matched width at the configured idler wavelength"},
      {"validate", "Run the invariant suite; exit 1 on any failure"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config,-c", req.config_path, "JSON config file, '-' for stdin")->required();
    sub->add_option("--out,-o", req.out_path, "Output file (default stdout)");
    sub->add_option("--format,-f", req.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->callback([&req, sub] { req.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : taperconv::kExitConfigError;
  }
  return taperconv::run_cli(req, std::cout, std::cerr);
}
