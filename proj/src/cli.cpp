#include "taperconv/cli.hpp"

#include "taperconv/analytic.hpp"
#include "taperconv/config.hpp"
#include "taperconv/errors.hpp"
#include "taperconv/experiments.hpp"
#include "taperconv/io.hpp"
#include "taperconv/spectrum.hpp"
#include "taperconv/validation.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace taperconv {

using nlohmann::ordered_json;

namespace {

ordered_json json_number(double v) {
  return std::isfinite(v) ? ordered_json(round_output(v)) : ordered_json(nullptr);
}

struct Output {
  std::ostringstream text;
  int status = kExitOk;
};

bool as_json(const CliRequest& r) { return r.format == "json"; }

void cmd_propagate(const CliRequest& req, const RunConfig& cfg, Output& o) {
  const auto s = cfg.scenario();
  const double lambda = cfg.simulation.lambda3;
  const auto steps = resolve_step_count(s.model, s.profile, s.length_um, s.pump_power_w, lambda,
                                        s.settings);
  const auto m = propagate(s, lambda);
  const auto e = efficiency(m);
  const cplx entries[] = {m.m11, m.m12, m.m21, m.m22};
  const char* names[] = {"m11", "m12", "m21", "m22"};

  if (as_json(req)) {
    auto j = output_header(cfg);
    ordered_json r;
    r["lambda3_nm"] = round_output(lambda);
    r["eta"] = round_output(e.value);
    r["eta_raw"] = round_output(e.raw);
    r["steps"] = steps;
    for (int i = 0; i < 4; ++i)
      r[names[i]] = {round_output(entries[i].real()), round_output(entries[i].imag())};
    r["unitarity_defect"] = round_output(unitarity_defect(m));
    j["result"] = r;
    o.text << j.dump(2) << '\n';
    return;
  }
  write_csv_preamble(o.text, cfg);
  o.text << "lambda3_nm,eta,eta_raw,steps";
  for (const char* n : names) o.text << ',' << n << "_re," << n << "_im";
  o.text << ",unitarity_defect\n";
  o.text << format_number(lambda) << ',' << format_number(e.value) << ',' << format_number(e.raw)
         << ',' << steps;
  for (const auto& x : entries) o.text << ',' << format_number(x.real()) << ',' << format_number(x.imag());
  o.text << ',' << format_number(unitarity_defect(m)) << '\n';
}

WavelengthGrid configured_grid(const RunConfig& cfg, const Scenario& s) {
  if (cfg.spectrum.lambda_min)
    return {*cfg.spectrum.lambda_min, *cfg.spectrum.lambda_max, cfg.spectrum.points};
  auto g = default_grid(s);
  g.points = cfg.spectrum.points;
  return g;
}

void cmd_spectrum(const CliRequest& req, const RunConfig& cfg, Output& o, std::ostream& err) {
  const auto s = cfg.scenario();
  const auto grid = configured_grid(cfg, s);
  const auto sp = compute_spectrum(s, grid);

  std::optional<double> width;
  std::string width_error;
  try {
    width = fwhm(sp);
  } catch (const std::exception& e) {
    width_error = e.what();
  }
  const auto area = integrate_area(sp);
  if (!area.resolved) err << "warning: " << area.warning << '\n';
  const auto peaks = find_peaks(sp);

  if (as_json(req)) {
    auto j = output_header(cfg);
    j["grid"] = grid_json(grid);
    j["fwhm_nm"] = width ? json_number(*width) : ordered_json(nullptr);
    if (!width) j["fwhm_error"] = width_error;
    j["area_nm"] = round_output(area.area_nm);
    j["area_resolved"] = area.resolved;
    auto pk = ordered_json::array();
    for (const auto& p : peaks)
      pk.push_back({{"lambda_nm", round_output(p.lambda_nm)},
                    {"eta", round_output(p.eta)},
                    {"prominence", round_output(p.prominence)}});
    j["peaks"] = pk;
    auto lam = ordered_json::array();
    auto eta = ordered_json::array();
    for (std::size_t i = 0; i < sp.etas.size(); ++i) {
      lam.push_back(round_output(sp.lambdas_nm[i]));
      eta.push_back(round_output(sp.etas[i]));
    }
    j["lambda_nm"] = lam;
    j["eta"] = eta;
    o.text << j.dump(2) << '\n';
    return;
  }
  write_csv_preamble(o.text, cfg);
  o.text << "# fwhm_nm: " << (width ? format_number(*width) : "unresolved (" + width_error + ")")
         << '\n';
  o.text << "# area_nm: " << format_number(area.area_nm) << (area.resolved ? "" : " (unresolved)")
         << '\n';
  o.text << "# peaks:";
  for (const auto& p : peaks) o.text << ' ' << format_number(p.lambda_nm) << '@' << format_number(p.eta);
  o.text << '\n';
  write_spectrum_csv_rows(o.text, sp);
}

void cmd_sweep(const CliRequest& req, const RunConfig& cfg, Output& o, std::ostream& err) {
  if (!cfg.sweep) throw ConfigError("sweep", "section required for the sweep command");
  SweepOptions opt;
  opt.observable = cfg.sweep->observable;
  if (cfg.spectrum.lambda_min)
    opt.grid = WavelengthGrid{*cfg.spectrum.lambda_min, *cfg.spectrum.lambda_max, cfg.spectrum.points};
  const auto records =
      sweep(cfg.scenario(), cfg.sweep->parameter, cfg.sweep->values, cfg.simulation.lambda3, opt);
  for (const auto& r : records)
    for (const auto& w : r.warnings)
      err << "warning: " << r.parameter << " = " << format_number(r.value) << ": " << w << '\n';

  if (as_json(req)) {
    o.text << output_header(cfg).dump() << '\n';
    for (const auto& r : records) o.text << record_json(r).dump() << '\n';
    return;
  }
  write_csv_preamble(o.text, cfg);
  o.text << record_csv_header() << '\n';
  for (const auto& r : records) write_record_csv(o.text, r);
}

void cmd_area_law(const CliRequest& req, const RunConfig& cfg, Output& o, std::ostream& err) {
  std::vector<double> dws{0.0, 2.0, 4.0, 8.0};
  if (cfg.sweep && cfg.sweep->parameter == param::kDeltaW) dws = cfg.sweep->values;
  const auto base = cfg.scenario();
  SweepOptions opt;
  opt.observable = Observable::Area;
  if (cfg.spectrum.lambda_min)
    opt.grid = WavelengthGrid{*cfg.spectrum.lambda_min, *cfg.spectrum.lambda_max, cfg.spectrum.points};
  const auto records = sweep(base, param::kDeltaW, dws, cfg.simulation.lambda3, opt);

  const double w = reference_width(base);
  const double g = coupling_g(base.model, w, base.pump_power_w);
  const double slope = dbeta_dlambda_at_reference(base);
  const double kappa = std::abs(kappa_at_reference(base));
  const auto analytic = area_uniform(g, base.length_um, slope);

  double lo = records.front().observed;
  double hi = lo;
  double sum = 0.0;
  for (const auto& r : records) {
    lo = std::min(lo, r.observed);
    hi = std::max(hi, r.observed);
    sum += r.observed;
    for (const auto& x : r.warnings)
      err << "warning: delta_w = " << format_number(r.value) << ": " << x << '\n';
  }
  const double spread = (hi - lo) / (sum / static_cast<double>(records.size()));
  const auto lz = [&](double dw) {
    return dw == 0.0 ? INFINITY : landau_zener_exponent(g, kappa * dw / base.length_um);
  };

  if (as_json(req)) {
    auto j = output_header(cfg);
    j["area_uniform_nm"] = round_output(analytic.value_nm);
    j["weak_coupling"] = analytic.weak_coupling;
    j["spread"] = round_output(spread);
    auto rows = ordered_json::array();
    for (const auto& r : records)
      rows.push_back({{"delta_w_nm", round_output(r.value)},
                      {"area_nm", round_output(r.observed)},
                      {"ratio", round_output(r.observed / analytic.value_nm)},
                      {"lz_exponent", json_number(lz(r.value))},
                      {"resolved", r.warnings.empty()}});
    j["rows"] = rows;
    o.text << j.dump(2) << '\n';
    return;
  }
  write_csv_preamble(o.text, cfg);
  o.text << "# area_uniform_nm: " << format_number(analytic.value_nm)
         << (analytic.weak_coupling ? "" : " (gL >= 1, weak-coupling estimate invalid)") << '\n';
  o.text << "# spread: " << format_number(spread) << '\n';
  o.text << "delta_w_nm,area_nm,area_uniform_nm,ratio,lz_exponent,resolved\n";
  for (const auto& r : records)
    o.text << format_number(r.value) << ',' << format_number(r.observed) << ','
           << format_number(analytic.value_nm) << ',' << format_number(r.observed / analytic.value_nm)
           << ',' << format_number(lz(r.value)) << ',' << (r.warnings.empty() ? "true" : "false")
           << '\n';
}

void cmd_phase_match(const CliRequest& req, const RunConfig& cfg, Output& o) {
  const auto model = cfg.model();
  const double lambda = cfg.simulation.lambda3;
  const double w = phase_matched_width(model, lambda);
  const double residual = delta_beta(model, w, lambda);
  if (as_json(req)) {
    auto j = output_header(cfg);
    j["result"] = {{"lambda3_nm", round_output(lambda)},
                   {"w_um", round_output(w)},
                   {"residual_rad_per_um", round_output(residual)}};
    o.text << j.dump(2) << '\n';
    return;
  }
  write_csv_preamble(o.text, cfg);
  o.text << "lambda3_nm,w_um,residual_rad_per_um\n"
         << format_number(lambda) << ',' << format_number(w) << ',' << format_number(residual)
         << '\n';
}

void cmd_validate(const CliRequest& req, const RunConfig& cfg, Output& o, std::ostream& err) {
  const auto checks = run_validation(cfg);
  std::size_t passed = 0;
  for (const auto& c : checks) passed += c.passed ? 1 : 0;
  if (passed != checks.size()) o.status = kExitValidationFailed;
  err << "validate: " << passed << '/' << checks.size() << " checks passed\n";

  if (as_json(req)) {
    auto j = output_header(cfg);
    auto arr = ordered_json::array();
    for (const auto& c : checks)
      arr.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = arr;
    j["passed"] = passed == checks.size();
    o.text << j.dump(2) << '\n';
    return;
  }
  write_csv_preamble(o.text, cfg);
  o.text << "check,passed,detail\n";
  for (const auto& c : checks)
    o.text << c.name << ',' << (c.passed ? "true" : "false") << ',' << csv_field(c.detail) << '\n';
}

} // namespace

int run_cli(const CliRequest& req, std::ostream& out, std::ostream& err) {
  try {
    if (req.format != "csv" && req.format != "json")
      throw ConfigError("--format", "expected csv or json, got '" + req.format + "'");
    const auto cfg = load_config(req.config_path);

    Output o;
    if (req.command == "propagate")
      cmd_propagate(req, cfg, o);
    else if (req.command == "spectrum")
      cmd_spectrum(req, cfg, o, err);
    else if (req.command == "sweep")
      cmd_sweep(req, cfg, o, err);
    else if (req.command == "area-law")
      cmd_area_law(req, cfg, o, err);
    else if (req.command == "phase-match")
      cmd_phase_match(req, cfg, o);
    else if (req.command == "validate")
      cmd_validate(req, cfg, o, err);
    else
      throw ConfigError("command", "unknown subcommand '" + req.command + "'");

    if (req.out_path.empty()) {
      out << o.text.str();
    } else {
      std::ofstream f(req.out_path, std::ios::binary);
      if (!(f << o.text.str()))
        throw std::runtime_error("cannot write output file '" + req.out_path + "'");
    }
    return o.status;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

} // namespace taperconv
