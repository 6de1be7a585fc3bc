#pragma once

#include "taperconv/scenario.hpp"
#include "taperconv/spectrum.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace taperconv {

enum class Observable { EtaPeak, EtaAtCenter, Area, Fwhm };

std::string_view to_string(Observable o) noexcept;
// Throws InputError for unknown names.
Observable observable_from_string(std::string_view name);

// Swept parameter names as they appear in records and configs.
namespace param {
inline constexpr std::string_view kLength = "length";
inline constexpr std::string_view kDeltaW = "delta_w";
inline constexpr std::string_view kPump = "pump_power";
inline constexpr std::string_view kPeriod = "period";
} // namespace param

struct SweepRecord {
  std::string parameter;
  double value;
  // Snapshot of every input; evaluate_record() reproduces `observed` from it.
  Scenario scenario;
  double lambda3_nm;                  // used by eta_at_center
  std::optional<WavelengthGrid> grid; // used by spectral observables
  Observable observable;
  double observed;
  std::vector<std::string> warnings;
};

struct Evaluation {
  double value;
  std::vector<std::string> warnings;
};

// Spectral observables default to default_grid (peak, fwhm) or area_grid
// (area) when no grid is given.
Evaluation evaluate(const Scenario& scenario, Observable observable, double lambda3_nm,
                    const std::optional<WavelengthGrid>& grid, int threads = 0);

Evaluation evaluate_record(const SweepRecord& record, int threads = 0);

struct SweepOptions {
  PropagationSettings settings; // ignored by sweep(), which uses base.settings
  Observable observable = Observable::EtaAtCenter;
  int threads = 0;
  // Fixed grid for spectral observables instead of the per-record automatic one.
  std::optional<WavelengthGrid> grid;
};

// Copy of `base` with one parameter replaced. delta_w applies to linear and
// cosine profiles (a uniform profile becomes a linear taper around its
// width); period applies to cosine profiles (uniform and linear ones become
// cosine modulations with the same center and delta_w). Throws InputError for
// combinations that have no meaning, e.g. delta_w on a piecewise profile.
Scenario apply_parameter(const Scenario& base, std::string_view parameter, double value);

// One record per value, evaluated concurrently where possible and sorted by
// value.
std::vector<SweepRecord> sweep(const Scenario& base, std::string_view parameter,
                               std::span<const double> values, double lambda3_nm,
                               const SweepOptions& options = {});

// Length sweep on a profile template; linear tapers are rebuilt per length
// with delta_w fixed.
std::vector<SweepRecord> sweep_length(const DispersionModel& model, const TaperProfile& profile,
                                      std::span<const double> lengths_um, double pump_power_w,
                                      double lambda3_nm, const SweepOptions& options = {});

// Linear tapers centered on the phase-matched width.
std::vector<SweepRecord> sweep_delta_w(const DispersionModel& model, double length_um,
                                       double pump_power_w, std::span<const double> delta_w_nm,
                                       double lambda3_nm, const SweepOptions& options = {});

std::vector<SweepRecord> sweep_pump(const DispersionModel& model, const TaperProfile& profile,
                                    double length_um, std::span<const double> pump_powers_w,
                                    double lambda3_nm, const SweepOptions& options = {});

// Integrated spectral area of linear tapers versus delta_w or pump power.
std::vector<SweepRecord> area_sweep_delta_w(const DispersionModel& model, double length_um,
                                            double pump_power_w,
                                            std::span<const double> delta_w_nm,
                                            const SweepOptions& options = {});
std::vector<SweepRecord> area_sweep_pump(const DispersionModel& model, double length_um,
                                         double delta_w_nm, std::span<const double> pump_powers_w,
                                         const SweepOptions& options = {});

// Cosine-modulated guides versus modulation period; observable defaults to
// area when options.observable is EtaAtCenter.
std::vector<SweepRecord> sweep_period(const DispersionModel& model, double length_um,
                                      double pump_power_w, double delta_w_nm,
                                      std::span<const double> periods_um,
                                      const SweepOptions& options = {});

inline constexpr double kSaturationDeviation = 0.10;

// Area-versus-pump records: fit a line through the origin to the lowest
// quartile of pump powers; the threshold is the smallest pump power whose
// area deviates from the fit by more than 10%. +inf when none does.
double saturation_threshold(std::span<const double> pump_powers_w, std::span<const double> areas);
double saturation_threshold(std::span<const SweepRecord> records);

// Where the weak-sweep assumption |g|^2 << |d(dbeta)/dz| breaks down for a
// linear taper: the pump power and length at which the Landau-Zener exponent
// 2 pi g^2 / |d(dbeta)/dz| reaches 0.5.
struct AdiabaticThresholds {
  double lz_exponent; // at the given pump power and length
  double pump_w;
  double length_um;
};

inline constexpr double kAdiabaticExponentLimit = 0.5;

AdiabaticThresholds adiabatic_thresholds(const DispersionModel& model, double length_um,
                                         double pump_power_w, double delta_w_nm);

} // namespace taperconv
