#pragma once

#include "taperconv/scenario.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace taperconv {

inline constexpr std::size_t kMinSpectrumPoints = 21;
inline constexpr std::size_t kDefaultSpectrumPoints = 801;

// Uniform idler-wavelength grid, endpoints included.
struct WavelengthGrid {
  double min_nm;
  double max_nm;
  std::size_t points;

  void validate() const;
  double at(std::size_t i) const noexcept;
  double spacing() const noexcept;
};

struct Spectrum {
  std::vector<double> lambdas_nm;
  std::vector<double> etas;
  std::optional<Scenario> scenario; // configuration that produced it, if any

  void validate() const;
};

// One propagate + efficiency per grid point, fanned out over OpenMP threads.
// Output is bitwise independent of the thread count.
Spectrum compute_spectrum(const Scenario& scenario, const WavelengthGrid& grid, int threads = 0);

// Single-threaded reference of compute_spectrum.
Spectrum compute_spectrum_serial(const Scenario& scenario, const WavelengthGrid& grid);

// Center +- max(3 x bandwidth_estimate, 2 nm), 801 points.
WavelengthGrid default_grid(const Scenario& scenario);

// Grid for spectral integrals: the conversion band plus a margin where the
// sinc^2-like tails have decayed (|Omega| L >= 100 past the band edge),
// sampled at <= 1/10 of the finite-length ripple period 2 pi / (L dbeta_dlambda).
WavelengthGrid area_grid(const Scenario& scenario);

// Full width at half maximum with linearly interpolated outermost crossings.
// Throws SolveError when the maximum or a half crossing is not inside the grid.
double fwhm(const Spectrum& s);

struct AreaResult {
  double area_nm;
  bool resolved;       // eta at both ends below 1% of the peak
  std::string warning; // empty when resolved
};

// Trapezoidal integral of eta over lambda.
AreaResult integrate_area(const Spectrum& s);

struct Peak {
  double lambda_nm;
  double eta;
  double prominence;
};

// Local maxima whose topographic prominence exceeds min_prominence x max(eta),
// refined by a parabola through the three samples around each maximum and
// sorted by descending eta.
std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence = 0.05);

} // namespace taperconv
