#include "taperconv/validation.hpp"

#include "taperconv/analytic.hpp"
#include "taperconv/experiments.hpp"
#include "taperconv/io.hpp"
#include "taperconv/reference.hpp"
#include "taperconv/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace taperconv {

namespace {

using Check = std::function<CheckResult()>;

CheckResult verdict(std::string name, bool passed, const std::string& detail) {
  return {std::move(name), passed, detail};
}

CheckResult skipped(std::string name, const std::string& why) {
  return {std::move(name), true, "skipped: " + why};
}

std::string num(double v) { return format_number(v); }

struct Context {
  DispersionModel model;
  double w_ref;
  double center;
  double slope; // dbeta_dlambda at w_ref
};

// Pump power that gives coupling g at the reference width.
double pump_for(const Context& c, double g) {
  const double g1 = coupling_g(c.model, c.w_ref, c.model.coupling().p_ref_w);
  return c.model.coupling().p_ref_w * (g / g1) * (g / g1);
}

// Idler wavelength where the uniform guide at w_ref has mismatch db.
double lambda_for(const Context& c, double db) { return c.center + db / c.slope; }

CheckResult linearity(const Context& c) {
  const char* name = "dispersion.linearity";
  const auto* s = c.model.synthetic();
  if (s == nullptr) return skipped(name, "tabulated model");
  const double h = 1e-3;
  const double kappa =
      -(delta_beta(c.model, c.w_ref + h, c.center) - delta_beta(c.model, c.w_ref - h, c.center)) /
      (2.0 * h) / 1000.0;
  const double slope =
      (delta_beta(c.model, c.w_ref, c.center + 1.0) - delta_beta(c.model, c.w_ref, c.center - 1.0)) /
      2.0;
  const double ek = std::abs(kappa - s->kappa_w) / s->kappa_w;
  const double es = std::abs(slope - s->dbeta_dlambda) / s->dbeta_dlambda;
  return verdict(name, ek < 1e-9 && es < 1e-9,
                 "kappa_w rel err " + num(ek) + ", dbeta_dlambda rel err " + num(es));
}

CheckResult coupling_scaling(const Context& c) {
  const double p = c.model.coupling().p_ref_w;
  const double g1 = coupling_g(c.model, c.w_ref, p);
  const double g4 = coupling_g(c.model, c.w_ref, 4.0 * p);
  return verdict("dispersion.coupling_sqrt_power", g4 == 2.0 * g1,
                 "g(4P) = " + num(g4) + ", 2 g(P) = " + num(2.0 * g1));
}

CheckResult phase_match(const Context& c) {
  double worst = 0.0;
  for (double d : {-5.0, 0.0, 5.0}) {
    const double w = phase_matched_width(c.model, c.center + d);
    worst = std::max(worst, std::abs(delta_beta(c.model, w, c.center + d)));
  }
  return verdict("dispersion.phase_match_residual", worst < 1e-10, "max |dbeta| " + num(worst));
}

CheckResult tabulated_round_trip(const Context& c) {
  const char* name = "dispersion.tabulated_round_trip";
  const auto* s = c.model.synthetic();
  if (s == nullptr) return skipped(name, "tabulated model");
  const double lo = s->w0_um - 0.05;
  const double hi = s->w0_um + 0.05;
  const DispersionModel table(TabulatedDispersion(synthetic_index_samples(*s, lo, hi, 41), s->design),
                              c.model.coupling());
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double w = lo + (hi - lo) * i / 100.0;
    for (double d : {-10.0, 0.0, 10.0})
      worst = std::max(worst, std::abs(delta_beta(table, w, c.center + d) -
                                       delta_beta(c.model, w, c.center + d)));
  }
  const double es =
      std::abs(dbeta_dlambda_from_indices(*table.tabulated(), s->w0_um) - s->dbeta_dlambda) /
      s->dbeta_dlambda;
  return verdict(name, worst < 1e-6 && es < 1e-9,
                 "max |dbeta diff| " + num(worst) + ", dbeta_dlambda rel err " + num(es));
}

CheckResult dbeta_dz_fd(const Context& c) {
  const TaperProfile lin(LinearProfile{c.w_ref, 4.0, 1000.0});
  const TaperProfile cos(CosineProfile{c.w_ref, 4.0, 500.0});
  double worst = 0.0;
  for (const auto& [profile, z] : {std::pair{&lin, 300.0}, std::pair{&cos, 100.0}}) {
    const double h = 0.01;
    const double fd = (delta_beta(c.model, width_at(*profile, z + h), c.center) -
                       delta_beta(c.model, width_at(*profile, z - h), c.center)) /
                      (2.0 * h);
    const double exact = dbeta_dz(*profile, c.model, z, c.center);
    worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
  }
  return verdict("profile.dbeta_dz_finite_difference", worst < 1e-7, "max rel err " + num(worst));
}

CheckResult uniform_oracle(const Context& c) {
  constexpr double L = 1000.0;
  const TaperProfile uniform(UniformProfile{c.w_ref});
  double worst = 0.0;
  double worst_defect = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double gl = 0.01 + (3.0 - 0.01) * i / 9.0;
    const double p = pump_for(c, gl / L);
    for (int j = 0; j < 10; ++j) {
      const double lambda = lambda_for(c, 20.0 * j / 9.0 / L);
      const auto m = propagate(c.model, uniform, L, p, lambda);
      const double exact = eta_uniform(delta_beta(c.model, c.w_ref, lambda),
                                       coupling_g(c.model, c.w_ref, p), L);
      worst = std::max(worst, std::abs(efficiency(m).raw - exact) / (exact + 1e-6));
      worst_defect = std::max(worst_defect, unitarity_defect(m));
    }
  }
  return verdict("propagation.uniform_oracle", worst < 1e-6 && worst_defect < 1e-9,
                 "max rel err " + num(worst) + " over 10x10 (gL, dbeta L) grid");
}

CheckResult unitarity(const Context& c) {
  double worst = 0.0;
  for (double dw : {2.0, 4.0, 8.0})
    for (double p : {0.5, 1.0, 10.0}) {
      const TaperProfile lin(LinearProfile{c.w_ref, dw, 1000.0});
      const TaperProfile cos(CosineProfile{c.w_ref, dw, 500.0});
      for (double d : {-5.0, 0.0, 3.0}) {
        worst = std::max(worst, unitarity_defect(propagate(c.model, lin, 1000.0, p, c.center + d)));
        worst = std::max(worst, unitarity_defect(propagate(c.model, cos, 1500.0, p, c.center + d)));
      }
    }
  return verdict("propagation.unitarity", worst < 1e-9, "max |M M^dagger - I| " + num(worst));
}

CheckResult periodicity(const Context& c) {
  constexpr double T = 500.0;
  constexpr std::size_t m = 256;
  const TaperProfile cos(CosineProfile{c.w_ref, 4.0, T});
  PropagationSettings one;
  one.step_count = m;
  const auto mt = propagate(c.model, cos, T, 1.0, c.center, one);
  double worst = 0.0;
  for (unsigned n : {2U, 8U}) {
    PropagationSettings full;
    full.step_count = m * n;
    const auto ml = propagate(c.model, cos, T * n, 1.0, c.center, full);
    worst = std::max(worst, max_abs_difference(ml, matrix_power(mt, n)));
  }
  return verdict("propagation.periodicity", worst < 1e-8,
                 "max |M(NT) - M(T)^N| " + num(worst) + " for N = 2, 8");
}

CheckResult gauge(const Context& c) {
  struct Case {
    TaperProfile profile;
    double length;
    double pump;
    double lambda;
  };
  const Case cases[] = {
      {UniformProfile{c.w_ref}, 1000.0, pump_for(c, 1e-3), lambda_for(c, 5e-3)},
      {LinearProfile{c.w_ref, 4.0, 1000.0}, 1000.0, 1.0, c.center + 2.0},
      {CosineProfile{c.w_ref, 4.0, 500.0}, 2000.0, 1.0, c.center},
  };
  double worst = 0.0;
  for (const auto& k : cases) {
    const double local = efficiency(propagate(c.model, k.profile, k.length, k.pump, k.lambda)).raw;
    const double ip = efficiency(reference::propagate_interaction_picture(c.model, k.profile, k.length,
                                                                          k.pump, k.lambda))
                          .raw;
    worst = std::max(worst, std::abs(local - ip));
  }
  return verdict("propagation.gauge_invariance", worst < 1e-8,
                 "max |eta_local - eta_interaction| " + num(worst));
}

CheckResult convergence(const Context& c) {
  constexpr double L = 1000.0;
  const TaperProfile uniform(UniformProfile{c.w_ref});
  const double p = pump_for(c, 1e-3);
  const double lambda = lambda_for(c, 5.0 / L);
  const double db = delta_beta(c.model, c.w_ref, lambda);
  const double g = coupling_g(c.model, c.w_ref, p);
  const double omega = std::sqrt(0.25 * db * db + g * g);
  const cplx exact = cplx{0.0, 1.0} * g * std::sin(omega * L) / omega;

  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t n : {40, 80, 160, 400}) {
    PropagationSettings s;
    s.step_count = n;
    x.push_back(std::log(L / static_cast<double>(n)));
    y.push_back(std::log(std::abs(propagate(c.model, uniform, L, p, lambda, s).m21 - exact)));
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double order = sxy / sxx;
  return verdict("propagation.convergence_order", order >= 3.8,
                 "observed order " + num(order) + " over 40..400 steps");
}

CheckResult uniform_loss(const Context& c) {
  constexpr double L = 10000.0;
  constexpr double alpha = 1.0;
  const TaperProfile uniform(UniformProfile{c.w_ref});
  PropagationSettings lossy;
  lossy.loss_alpha1_per_m = alpha;
  lossy.loss_alpha3_per_m = alpha;
  const auto m0 = propagate(c.model, uniform, L, 1.0, c.center);
  const auto m1 = propagate(c.model, uniform, L, 1.0, c.center, lossy);
  const double decay = std::exp(-alpha * 1e-6 * L);
  const double norm = propagate_state(m1, {1.0, 0.0}).norm();
  const double en = std::abs(norm - decay);
  const double ee = std::abs(efficiency(m1).raw - efficiency(m0).raw * decay);
  return verdict("propagation.uniform_loss", en < 1e-8 && ee < 1e-8,
                 "norm err " + num(en) + ", eta err " + num(ee));
}

CheckResult lz_small(const Context&) {
  bool ok = true;
  double worst = 0.0;
  for (double x : {1e-4, 3e-4, 9e-4}) {
    // rate chosen so that 2 pi g^2 / rate = x with g = 1e-3
    const double g = 1e-3;
    const double eta = eta_landau_zener(g, kTwoPi * g * g / x);
    const double r = eta / x;
    ok = ok && r >= 1.0 - x && r <= 1.0;
    worst = std::max(worst, 1.0 - r);
  }
  return verdict("analytic.lz_small_argument", ok, "max 1 - eta/x " + num(worst));
}

CheckResult area_chain(const Context& c) {
  constexpr double L = 1000.0;
  const double kappa = std::abs(ddelta_beta_dw(c.model, c.w_ref, c.center)) / 1000.0;
  const double g = coupling_g(c.model, c.w_ref, 1.0);
  const double analytic = area_uniform(g, L, c.slope).value_nm;
  bool ok = true;
  std::string detail;
  for (double x : {1e-2, 1e-3, 1e-4}) {
    // delta_w giving LZ exponent x
    const double dw = kTwoPi * g * g * L / (kappa * x);
    const double chain =
        eta_landau_zener(g, kappa * dw / L) * bandwidth_estimate(dw, kappa, c.slope);
    const double err = std::abs(chain / analytic - 1.0);
    ok = ok && err <= 0.5 * x + 1e-12;
    detail += (detail.empty() ? "" : ", ") + ("x=" + num(x) + ": " + num(err));
  }
  return verdict("analytic.area_chain", ok, "rel err " + detail);
}

CheckResult determinism(const Context& c) {
  const Scenario s{c.model, LinearProfile{c.w_ref, 4.0, 1000.0}, 1000.0, 1.0, {}};
  auto grid = default_grid(s);
  grid.points = 41;
  const auto a = compute_spectrum(s, grid, 3);
  const auto b = compute_spectrum_serial(s, grid);
  return verdict("spectrum.determinism", a.etas == b.etas && a.lambdas_nm == b.lambdas_nm,
                 "parallel (3 threads) vs serial on 41 points");
}

CheckResult trapezoid_linearity(const Context& c) {
  const Scenario s{c.model, UniformProfile{c.w_ref}, 1000.0, 1.0, {}};
  auto grid = default_grid(s);
  grid.points = 101;
  auto sp = compute_spectrum(s, grid);
  const double a = integrate_area(sp).area_nm;
  for (auto& e : sp.etas) e *= 0.25;
  const double b = integrate_area(sp).area_nm;
  const double err = std::abs(b - 0.25 * a) / a;
  return verdict("spectrum.trapezoid_linearity", err < 1e-14, "rel err " + num(err));
}

CheckResult area_law(const Context& c) {
  constexpr double L = 1000.0;
  const Scenario base{c.model, LinearProfile{c.w_ref, 0.0, L}, L, 1.0, {}};
  SweepOptions o;
  o.observable = Observable::Area;
  const std::vector<double> dws{0.0, 2.0, 4.0, 8.0};
  const auto recs = sweep(base, param::kDeltaW, dws, c.center, o);
  double lo = recs.front().observed;
  double hi = lo;
  double sum = 0.0;
  for (const auto& r : recs) {
    lo = std::min(lo, r.observed);
    hi = std::max(hi, r.observed);
    sum += r.observed;
  }
  const double spread = (hi - lo) / (sum / recs.size());
  const double analytic = area_uniform(coupling_g(c.model, c.w_ref, 1.0), L, c.slope).value_nm;
  const double off = std::max(std::abs(lo / analytic - 1.0), std::abs(hi / analytic - 1.0));
  return verdict("spectrum.area_law", spread < 0.02 && off < 0.03,
                 "spread " + num(spread) + ", max deviation from 2 pi g^2 L / beta' " + num(off));
}

CheckResult reproducibility(const Context& c) {
  const Scenario base{c.model, LinearProfile{c.w_ref, 0.0, 1000.0}, 1000.0, 1.0, {}};
  const std::vector<double> dws{2.0, 4.0};
  const auto recs = sweep(base, param::kDeltaW, dws, c.center);
  bool ok = true;
  for (const auto& r : recs) ok = ok && evaluate_record(r).value == r.observed;
  return verdict("experiments.record_reproducibility", ok, "re-evaluated 2 records from snapshots");
}

CheckResult round_trip(const RunConfig& config) {
  const auto again = parse_config(nlohmann::json::parse(config.to_json().dump()));
  return verdict("cli.config_round_trip", again == config, "resolved echo reparses identically");
}

} // namespace

std::vector<CheckResult> run_validation(const RunConfig& config) {
  const auto model = config.model();
  const double w_ref = model.reference_width_um();
  const double center = model.design().lambda3_center_nm;
  if (std::isnan(w_ref))
    return {{"dispersion.reference_width", false, "model has no phase-matched width"}};
  const Context c{model, w_ref, center, dbeta_dlambda(model, w_ref)};

  const std::vector<std::pair<const char*, Check>> checks{
      {"dispersion.linearity", [&] { return linearity(c); }},
      {"dispersion.coupling_sqrt_power", [&] { return coupling_scaling(c); }},
      {"dispersion.phase_match_residual", [&] { return phase_match(c); }},
      {"dispersion.tabulated_round_trip", [&] { return tabulated_round_trip(c); }},
      {"profile.dbeta_dz_finite_difference", [&] { return dbeta_dz_fd(c); }},
      {"propagation.uniform_oracle", [&] { return uniform_oracle(c); }},
      {"propagation.unitarity", [&] { return unitarity(c); }},
      {"propagation.periodicity", [&] { return periodicity(c); }},
      {"propagation.gauge_invariance", [&] { return gauge(c); }},
      {"propagation.convergence_order", [&] { return convergence(c); }},
      {"propagation.uniform_loss", [&] { return uniform_loss(c); }},
      {"analytic.lz_small_argument", [&] { return lz_small(c); }},
      {"analytic.area_chain", [&] { return area_chain(c); }},
      {"spectrum.determinism", [&] { return determinism(c); }},
      {"spectrum.trapezoid_linearity", [&] { return trapezoid_linearity(c); }},
      {"spectrum.area_law", [&] { return area_law(c); }},
      {"experiments.record_reproducibility", [&] { return reproducibility(c); }},
      {"cli.config_round_trip", [&] { return round_trip(config); }},
  };

  std::vector<CheckResult> out;
  for (const auto& [name, check] : checks) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("error: ") + e.what()});
    }
  }
  return out;
}

} // namespace taperconv
