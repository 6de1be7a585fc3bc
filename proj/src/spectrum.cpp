#include "taperconv/spectrum.hpp"

#include "taperconv/analytic.hpp"
#include "taperconv/errors.hpp"
#include "taperconv/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <sstream>

namespace taperconv {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Rethrows `e` with the failing wavelength prepended, keeping the category.
[[noreturn]] void rethrow_at(std::exception_ptr e, double lambda_nm) {
  const std::string where = "at lambda3 = " + fmt(lambda_nm) + " nm: ";
  try {
    std::rethrow_exception(e);
  } catch (const ResourceError& x) {
    throw ResourceError(where + x.what());
  } catch (const RangeError& x) {
    throw RangeError(where + x.what());
  } catch (const DomainError& x) {
    throw DomainError(where + x.what());
  } catch (const InputError& x) {
    throw InputError(where + x.what());
  } catch (const SolveError& x) {
    throw SolveError(where + x.what());
  } catch (const std::exception& x) {
    throw std::runtime_error(where + x.what());
  }
}

double eta_at(const Scenario& s, double lambda_nm) {
  return efficiency(propagate(s, lambda_nm)).value;
}

} // namespace

void WavelengthGrid::validate() const {
  if (!(min_nm > 0.0) || !(max_nm > min_nm))
    throw InputError("wavelength grid needs 0 < lambda_min < lambda_max");
  if (points < kMinSpectrumPoints)
    throw InputError("wavelength grid needs at least " + std::to_string(kMinSpectrumPoints) +
                     " points");
}

double WavelengthGrid::at(std::size_t i) const noexcept {
  if (i + 1 == points) return max_nm;
  return min_nm + (max_nm - min_nm) * static_cast<double>(i) / static_cast<double>(points - 1);
}

double WavelengthGrid::spacing() const noexcept {
  return (max_nm - min_nm) / static_cast<double>(points - 1);
}

void Spectrum::validate() const {
  if (lambdas_nm.size() != etas.size()) throw InputError("spectrum arrays differ in length");
  if (lambdas_nm.size() < kMinSpectrumPoints)
    throw InputError("spectrum needs at least " + std::to_string(kMinSpectrumPoints) + " points");
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (i > 0 && !(lambdas_nm[i] > lambdas_nm[i - 1]))
      throw InputError("spectrum wavelengths must be strictly increasing");
    if (!(etas[i] >= 0.0 && etas[i] <= 1.0)) throw InputError("spectrum eta outside [0, 1]");
  }
}

Spectrum compute_spectrum(const Scenario& scenario, const WavelengthGrid& grid, int threads) {
  grid.validate();
  const auto n = static_cast<std::ptrdiff_t>(grid.points);
  Spectrum out{std::vector<double>(grid.points), std::vector<double>(grid.points), scenario};
  std::vector<std::exception_ptr> errors(grid.points);

#pragma omp parallel for schedule(dynamic, 4) num_threads(resolve_thread_count(threads))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double lambda = grid.at(k);
    out.lambdas_nm[k] = lambda;
    try {
      out.etas[k] = eta_at(scenario, lambda);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }

  for (std::size_t k = 0; k < errors.size(); ++k)
    if (errors[k]) rethrow_at(errors[k], out.lambdas_nm[k]);
  return out;
}

Spectrum compute_spectrum_serial(const Scenario& scenario, const WavelengthGrid& grid) {
  grid.validate();
  Spectrum out{{}, {}, scenario};
  out.lambdas_nm.reserve(grid.points);
  out.etas.reserve(grid.points);
  for (std::size_t k = 0; k < grid.points; ++k) {
    const double lambda = grid.at(k);
    out.lambdas_nm.push_back(lambda);
    try {
      out.etas.push_back(eta_at(scenario, lambda));
    } catch (...) {
      rethrow_at(std::current_exception(), lambda);
    }
  }
  return out;
}

WavelengthGrid default_grid(const Scenario& scenario) {
  const double center = scenario.model.design().lambda3_center_nm;
  const double bw = bandwidth_estimate(width_excursion_nm(scenario.profile),
                                       std::abs(kappa_at_reference(scenario)),
                                       dbeta_dlambda_at_reference(scenario));
  const double half = std::max(3.0 * std::abs(bw), 2.0);
  return {center - half, center + half, kDefaultSpectrumPoints};
}

WavelengthGrid area_grid(const Scenario& scenario) {
  constexpr double kTailPhase = 100.0;     // |Omega| L past the band edge
  constexpr double kSamplesPerRipple = 10.0;

  const double center = scenario.model.design().lambda3_center_nm;
  const double slope = dbeta_dlambda_at_reference(scenario);
  const double bw = bandwidth_estimate(width_excursion_nm(scenario.profile),
                                       std::abs(kappa_at_reference(scenario)), slope);
  const double L = scenario.length_um;
  // Omega ~ dbeta/2, so dbeta = 2 kTailPhase / L beyond the edge.
  const double margin = 2.0 * kTailPhase / (L * std::abs(slope));
  const double half = 0.5 * std::abs(bw) + margin;
  const double ripple = kTwoPi / (L * std::abs(slope));
  const double needed = std::ceil(2.0 * half / (ripple / kSamplesPerRipple)) + 1.0;
  const auto points = std::max(kDefaultSpectrumPoints, static_cast<std::size_t>(needed));
  return {center - half, center + half, points};
}

double fwhm(const Spectrum& s) {
  s.validate();
  const auto& y = s.etas;
  const auto& x = s.lambdas_nm;
  const std::size_t n = y.size();
  const auto imax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double peak = y[imax];
  if (!(peak > 0.0)) throw DomainError("spectrum has no positive maximum");
  if (imax == 0 || imax + 1 == n)
    throw SolveError("unresolved bandwidth: maximum at grid boundary; widen the wavelength grid");

  const double half = 0.5 * peak;
  std::size_t left = 0;
  while (y[left] < half) ++left;
  std::size_t right = n - 1;
  while (y[right] < half) --right;
  if (left == 0 || right + 1 == n)
    throw SolveError("unresolved bandwidth: half-maximum crossing outside grid; widen the "
                     "wavelength grid");

  const auto cross = [&](std::size_t below, std::size_t above) {
    const double t = (half - y[below]) / (y[above] - y[below]);
    return x[below] + t * (x[above] - x[below]);
  };
  return cross(right + 1, right) - cross(left - 1, left);
}

AreaResult integrate_area(const Spectrum& s) {
  s.validate();
  const auto& y = s.etas;
  const auto& x = s.lambdas_nm;
  double area = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) area += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);

  const double peak = *std::max_element(y.begin(), y.end());
  AreaResult r{area, true, {}};
  if (peak > 0.0 && (y.front() >= 0.01 * peak || y.back() >= 0.01 * peak)) {
    r.resolved = false;
    r.warning = "conversion band not resolved: eta at grid ends is " +
                fmt(std::max(y.front(), y.back()) / peak) +
                " of the peak (>= 0.01); area underestimates the tails";
  }
  return r;
}

std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence) {
  s.validate();
  if (!(min_prominence > 0.0 && min_prominence < 1.0))
    throw InputError("min_prominence must lie in (0, 1)");
  const auto& y = s.etas;
  const auto& x = s.lambdas_nm;
  const std::size_t n = y.size();
  const double peak = *std::max_element(y.begin(), y.end());
  std::vector<Peak> peaks;
  if (!(peak > 0.0)) return peaks;
  const double threshold = min_prominence * peak;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1])) continue;
    // Walk across a flat top; it must fall afterwards.
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 >= n || !(y[j + 1] < y[i])) continue;

    double left_min = y[i];
    for (std::size_t k = i; k-- > 0;) {
      if (y[k] > y[i]) break;
      left_min = std::min(left_min, y[k]);
    }
    double right_min = y[i];
    for (std::size_t k = j + 1; k < n; ++k) {
      if (y[k] > y[i]) break;
      right_min = std::min(right_min, y[k]);
    }
    const double prominence = y[i] - std::max(left_min, right_min);
    if (!(prominence > threshold)) continue;

    // Parabola through (i-1, i, i+1) on a possibly non-uniform grid.
    double lam = x[i];
    double eta = y[i];
    if (j == i) {
      const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
      const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
      const double d1 = (y1 - y0) / (x1 - x0);
      const double d2 = (y2 - y1) / (x2 - x1);
      const double a = (d2 - d1) / (x2 - x0);
      if (a < 0.0) {
        const double b = d1 - a * (x0 + x1);
        lam = -b / (2.0 * a);
        eta = y1 + (lam - x1) * (d1 + a * (lam - x0));
        // The vertex of a concave parabola through a strict maximum lies
        // between the neighbours; guard against round-off.
        lam = std::clamp(lam, x0, x2);
      }
    } else {
      lam = 0.5 * (x[i] + x[j]);
    }
    peaks.push_back({lam, eta, prominence});
    i = j;
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.eta > b.eta; });
  return peaks;
}

} // namespace taperconv
