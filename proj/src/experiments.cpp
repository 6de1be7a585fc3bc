#include "taperconv/experiments.hpp"

#include "taperconv/analytic.hpp"
#include "taperconv/errors.hpp"
#include "taperconv/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

namespace taperconv {

std::string_view to_string(Observable o) noexcept {
  switch (o) {
  case Observable::EtaPeak: return "eta_peak";
  case Observable::EtaAtCenter: return "eta_at_center";
  case Observable::Area: return "area";
  case Observable::Fwhm: return "fwhm";
  }
  return "unknown";
}

Observable observable_from_string(std::string_view name) {
  for (auto o : {Observable::EtaPeak, Observable::EtaAtCenter, Observable::Area, Observable::Fwhm})
    if (to_string(o) == name) return o;
  throw InputError("unknown observable '" + std::string(name) +
                   "' (expected eta_peak, eta_at_center, area or fwhm)");
}

Evaluation evaluate(const Scenario& scenario, Observable observable, double lambda3_nm,
                    const std::optional<WavelengthGrid>& grid, int threads) {
  switch (observable) {
  case Observable::EtaAtCenter:
    return {efficiency(propagate(scenario, lambda3_nm)).value, {}};
  case Observable::EtaPeak: {
    const auto s = compute_spectrum(scenario, grid.value_or(default_grid(scenario)), threads);
    return {*std::max_element(s.etas.begin(), s.etas.end()), {}};
  }
  case Observable::Fwhm: {
    const auto s = compute_spectrum(scenario, grid.value_or(default_grid(scenario)), threads);
    return {fwhm(s), {}};
  }
  case Observable::Area: {
    const auto s = compute_spectrum(scenario, grid.value_or(area_grid(scenario)), threads);
    auto a = integrate_area(s);
    Evaluation e{a.area_nm, {}};
    if (!a.resolved) e.warnings.push_back(std::move(a.warning));
    return e;
  }
  }
  throw InputError("unknown observable");
}

Evaluation evaluate_record(const SweepRecord& record, int threads) {
  return evaluate(record.scenario, record.observable, record.lambda3_nm, record.grid, threads);
}

namespace {

bool is_spectral(Observable o) { return o != Observable::EtaAtCenter; }

void require_values(std::span<const double> values, const char* what, bool allow_zero) {
  if (values.empty()) throw InputError(std::string(what) + " list is empty");
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0))
      throw InputError(std::string(what) + " values must be " +
                       (allow_zero ? "non-negative" : "positive"));
}

double taper_center(const DispersionModel& model) {
  const double w = model.reference_width_um();
  if (std::isnan(w))
    throw SolveError("dispersion model has no phase-matched width to center the taper on");
  return w;
}

// Evaluates records in place. Single-wavelength observables fan out over
// records; spectral ones run records in order and parallelize inside each
// spectrum. Output is sorted by parameter value.
std::vector<SweepRecord> run(std::vector<SweepRecord> records, int threads) {
  const auto n = static_cast<std::ptrdiff_t>(records.size());
  if (!records.empty() && !is_spectral(records.front().observable)) {
    std::vector<std::exception_ptr> errors(records.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_thread_count(threads))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      auto& r = records[static_cast<std::size_t>(i)];
      try {
        auto e = evaluate_record(r, 1);
        r.observed = e.value;
        r.warnings = std::move(e.warnings);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (auto& r : records) {
      auto e = evaluate_record(r, threads);
      r.observed = e.value;
      r.warnings = std::move(e.warnings);
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const SweepRecord& a, const SweepRecord& b) { return a.value < b.value; });
  return records;
}

SweepRecord make_record(std::string_view parameter, double value, Scenario scenario,
                        double lambda3_nm, Observable observable,
                        const std::optional<WavelengthGrid>& fixed = std::nullopt) {
  std::optional<WavelengthGrid> grid;
  if (fixed && is_spectral(observable))
    grid = fixed;
  else if (observable == Observable::Area)
    grid = area_grid(scenario);
  else if (is_spectral(observable))
    grid = default_grid(scenario);
  return {std::string(parameter), value, std::move(scenario), lambda3_nm, grid, observable, 0.0, {}};
}

} // namespace

Scenario apply_parameter(const Scenario& base, std::string_view parameter, double value) {
  Scenario s = base;
  if (parameter == param::kLength) {
    s.profile = with_length(base.profile, value);
    s.length_um = value;
  } else if (parameter == param::kPump) {
    s.pump_power_w = value;
  } else if (parameter == param::kDeltaW) {
    if (const auto* u = base.profile.get_if<UniformProfile>())
      s.profile = LinearProfile{u->w0_um, value, base.length_um};
    else if (const auto* l = base.profile.get_if<LinearProfile>())
      s.profile = LinearProfile{l->w0_um, value, l->length_um};
    else if (const auto* c = base.profile.get_if<CosineProfile>())
      s.profile = CosineProfile{c->w0_um, value, c->period_um};
    else
      throw InputError("delta_w cannot be swept on a " + std::string(base.profile.kind()) +
                       " profile");
  } else if (parameter == param::kPeriod) {
    if (const auto* u = base.profile.get_if<UniformProfile>())
      s.profile = CosineProfile{u->w0_um, 0.0, value};
    else if (const auto* l = base.profile.get_if<LinearProfile>())
      s.profile = CosineProfile{l->w0_um, l->delta_w_nm, value};
    else if (const auto* c = base.profile.get_if<CosineProfile>())
      s.profile = CosineProfile{c->w0_um, c->delta_w_nm, value};
    else
      throw InputError("period cannot be swept on a " + std::string(base.profile.kind()) +
                       " profile");
  } else {
    throw InputError("unknown sweep parameter '" + std::string(parameter) +
                     "' (expected length, delta_w, pump_power or period)");
  }
  return s;
}

std::vector<SweepRecord> sweep(const Scenario& base, std::string_view parameter,
                               std::span<const double> values, double lambda3_nm,
                               const SweepOptions& options) {
  const bool zero_ok = parameter == param::kPump || parameter == param::kDeltaW;
  require_values(values, std::string(parameter).c_str(), zero_ok);
  std::vector<SweepRecord> records;
  for (double v : values)
    records.push_back(make_record(parameter, v, apply_parameter(base, parameter, v), lambda3_nm,
                                  options.observable, options.grid));
  return run(std::move(records), options.threads);
}

std::vector<SweepRecord> sweep_length(const DispersionModel& model, const TaperProfile& profile,
                                      std::span<const double> lengths_um, double pump_power_w,
                                      double lambda3_nm, const SweepOptions& options) {
  require_values(lengths_um, "length", false);
  std::vector<SweepRecord> records;
  for (double L : lengths_um)
    records.push_back(make_record(param::kLength, L,
                                  {model, with_length(profile, L), L, pump_power_w, options.settings},
                                  lambda3_nm, options.observable, options.grid));
  return run(std::move(records), options.threads);
}

std::vector<SweepRecord> sweep_delta_w(const DispersionModel& model, double length_um,
                                       double pump_power_w, std::span<const double> delta_w_nm,
                                       double lambda3_nm, const SweepOptions& options) {
  require_values(delta_w_nm, "delta_w", true);
  const double w0 = taper_center(model);
  std::vector<SweepRecord> records;
  for (double dw : delta_w_nm)
    records.push_back(make_record(param::kDeltaW, dw,
                                  {model, TaperProfile(LinearProfile{w0, dw, length_um}), length_um,
                                   pump_power_w, options.settings},
                                  lambda3_nm, options.observable, options.grid));
  return run(std::move(records), options.threads);
}

std::vector<SweepRecord> sweep_pump(const DispersionModel& model, const TaperProfile& profile,
                                    double length_um, std::span<const double> pump_powers_w,
                                    double lambda3_nm, const SweepOptions& options) {
  require_values(pump_powers_w, "pump power", true);
  std::vector<SweepRecord> records;
  for (double p : pump_powers_w)
    records.push_back(make_record(param::kPump, p,
                                  {model, profile, length_um, p, options.settings}, lambda3_nm,
                                  options.observable, options.grid));
  return run(std::move(records), options.threads);
}

std::vector<SweepRecord> area_sweep_delta_w(const DispersionModel& model, double length_um,
                                            double pump_power_w,
                                            std::span<const double> delta_w_nm,
                                            const SweepOptions& options) {
  auto o = options;
  o.observable = Observable::Area;
  return sweep_delta_w(model, length_um, pump_power_w, delta_w_nm,
                       model.design().lambda3_center_nm, o);
}

std::vector<SweepRecord> area_sweep_pump(const DispersionModel& model, double length_um,
                                         double delta_w_nm, std::span<const double> pump_powers_w,
                                         const SweepOptions& options) {
  auto o = options;
  o.observable = Observable::Area;
  const TaperProfile profile(LinearProfile{taper_center(model), delta_w_nm, length_um});
  return sweep_pump(model, profile, length_um, pump_powers_w, model.design().lambda3_center_nm, o);
}

std::vector<SweepRecord> sweep_period(const DispersionModel& model, double length_um,
                                      double pump_power_w, double delta_w_nm,
                                      std::span<const double> periods_um,
                                      const SweepOptions& options) {
  require_values(periods_um, "period", false);
  const double w0 = taper_center(model);
  const Observable observable =
      options.observable == Observable::EtaAtCenter ? Observable::Area : options.observable;
  std::vector<SweepRecord> records;
  for (double T : periods_um)
    records.push_back(make_record(param::kPeriod, T,
                                  {model, TaperProfile(CosineProfile{w0, delta_w_nm, T}), length_um,
                                   pump_power_w, options.settings},
                                  model.design().lambda3_center_nm, observable, options.grid));
  return run(std::move(records), options.threads);
}

double saturation_threshold(std::span<const double> pump_powers_w, std::span<const double> areas) {
  constexpr std::size_t kMinRecords = 8;
  if (pump_powers_w.size() != areas.size()) throw InputError("pump and area lists differ in length");
  if (pump_powers_w.size() < kMinRecords)
    throw InputError("saturation threshold needs at least " + std::to_string(kMinRecords) +
                     " records, got " + std::to_string(pump_powers_w.size()));

  std::vector<std::size_t> order(pump_powers_w.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pump_powers_w[a] < pump_powers_w[b]; });

  const std::size_t quartile = std::max<std::size_t>(2, (order.size() + 3) / 4);
  double pp = 0.0;
  double pa = 0.0;
  for (std::size_t k = 0; k < quartile; ++k) {
    const auto i = order[k];
    pp += pump_powers_w[i] * pump_powers_w[i];
    pa += pump_powers_w[i] * areas[i];
  }
  if (!(pp > 0.0)) throw InputError("lowest-quartile pump powers are all zero");
  const double slope = pa / pp;

  for (const auto i : order) {
    const double p = pump_powers_w[i];
    if (!(p > 0.0)) continue;
    const double fit = slope * p;
    if (std::abs(areas[i] - fit) > kSaturationDeviation * std::abs(fit)) return p;
  }
  return std::numeric_limits<double>::infinity();
}

double saturation_threshold(std::span<const SweepRecord> records) {
  std::vector<double> p;
  std::vector<double> a;
  for (const auto& r : records) {
    if (r.parameter != param::kPump || r.observable != Observable::Area)
      throw InputError("saturation threshold needs area-versus-pump records");
    p.push_back(r.value);
    a.push_back(r.observed);
  }
  return saturation_threshold(p, a);
}

AdiabaticThresholds adiabatic_thresholds(const DispersionModel& model, double length_um,
                                         double pump_power_w, double delta_w_nm) {
  if (!(length_um > 0.0)) throw InputError("length must be > 0");
  const double w0 = taper_center(model);
  const double center = model.design().lambda3_center_nm;
  const double kappa = std::abs(ddelta_beta_dw(model, w0, center)) / 1000.0;
  const double rate = kappa * std::abs(delta_w_nm) / length_um;
  const double g = coupling_g(model, w0, pump_power_w);
  if (rate == 0.0) return {std::numeric_limits<double>::infinity(), 0.0, 0.0};
  const double x = landau_zener_exponent(g, rate);
  // The exponent is linear in both pump power and length.
  if (x == 0.0)
    return {0.0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  return {x, pump_power_w * kAdiabaticExponentLimit / x, length_um * kAdiabaticExponentLimit / x};
}

} // namespace taperconv
