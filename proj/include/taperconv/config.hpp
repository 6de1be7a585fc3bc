#pragma once

#include "taperconv/experiments.hpp"
#include "taperconv/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace taperconv {

// Run configuration as read from JSON, with every default resolved. Units
// follow the library: um, nm, W, m^-1 for loss.
struct DispersionConfig {
  std::string type = "synthetic"; // synthetic | tabulated
  double lambda1 = 1550.0;
  double lambda2 = 980.0;
  double lambda3_center = 0.0;
  // synthetic
  double w0 = 0.0;
  double kappa_w = 0.0;
  double dbeta_dlambda = 0.0;
  // tabulated; absolute after resolution
  std::string path;
  double g_ref = 0.0;
  double p_ref = 1.0;
  double g_slope = 0.0;

  friend bool operator==(const DispersionConfig&, const DispersionConfig&) = default;
};

struct ProfileConfig {
  std::string type = "uniform"; // uniform | linear | cosine | piecewise
  double w0 = 0.0;
  double delta_w = 0.0;
  double period = 0.0;
  std::vector<ProfilePoint> points;
  std::string path; // piecewise from CSV; absolute after resolution

  friend bool operator==(const ProfileConfig& a, const ProfileConfig& b) {
    if (a.points.size() != b.points.size()) return false;
    for (std::size_t i = 0; i < a.points.size(); ++i)
      if (a.points[i].z_um != b.points[i].z_um || a.points[i].w_um != b.points[i].w_um)
        return false;
    return a.type == b.type && a.w0 == b.w0 && a.delta_w == b.delta_w && a.period == b.period &&
           a.path == b.path;
  }
};

struct SimulationConfig {
  double length = 1000.0;
  double pump_power = 1.0;
  double lambda3 = 0.0;
  std::optional<std::size_t> step_count; // nullopt = auto
  double loss_alpha1 = 0.0;
  double loss_alpha3 = 0.0;

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

// Omitted bounds select the automatic grid for the command.
struct SpectrumConfig {
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
  std::size_t points = 801;

  friend bool operator==(const SpectrumConfig&, const SpectrumConfig&) = default;
};

struct SweepConfig {
  std::string parameter;
  std::vector<double> values;
  Observable observable = Observable::EtaAtCenter;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct RunConfig {
  DispersionConfig dispersion;
  ProfileConfig profile;
  SimulationConfig simulation;
  SpectrumConfig spectrum;
  std::optional<SweepConfig> sweep;

  DispersionModel model() const;
  TaperProfile taper() const;
  PropagationSettings settings() const;
  Scenario scenario() const;

  // Fully resolved echo; parse_config(to_json()) reproduces *this.
  nlohmann::ordered_json to_json() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Relative file paths resolve against base_dir. Throws ConfigError naming the
// offending JSON path for unknown keys, type mismatches and bad values.
RunConfig parse_config(const nlohmann::json& doc,
                       const std::filesystem::path& base_dir = std::filesystem::current_path());
RunConfig parse_config_text(const std::string& text,
                            const std::filesystem::path& base_dir = std::filesystem::current_path());

// "-" reads standard input.
RunConfig load_config(const std::string& path);

} // namespace taperconv
