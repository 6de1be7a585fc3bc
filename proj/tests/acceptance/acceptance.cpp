// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "taperconv/analytic.hpp"
#include "taperconv/experiments.hpp"
#include "taperconv/propagation.hpp"
#include "taperconv/spectrum.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace taperconv;

namespace {

// Tolerances.
constexpr double kOracleRel = 1e-6;
constexpr double kOracleAbs = 1e-12; // floor for grid points sitting on a zero of eta
constexpr double kOracleSeconds = 10.0;
constexpr double kUnitarity = 1e-9;
constexpr double kLzRel = 0.03;
constexpr double kAreaSpread = 0.02;
constexpr double kAreaAnalytic = 0.03;
constexpr double kFwhmR2 = 0.999;
constexpr double kFwhmSlopeRel = 0.10;
constexpr double kPeriodEntry = 1e-8;
constexpr double kOrder = 3.8;
constexpr double kLossAbs = 1e-8;

const DispersionModel kModel = default_model();
const double kCenter = kModel.design().lambda3_center_nm;
const double kBeta = kModel.synthetic()->dbeta_dlambda;
const double kKappa = kModel.synthetic()->kappa_w;
const double kG = kModel.coupling().g_ref;

struct Outcome {
  bool passed;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Scenario linear(double dw, double L, double pump = 1.0) {
  return {kModel, LinearProfile{0.773, dw, L}, L, pump, {}};
}

// Dispersion model whose coupling is dialed directly; delta_beta comes from
// wavelength detuning at the reference width.
DispersionModel with_coupling(double g) {
  return DispersionModel(default_synthetic(), CouplingSpec{g, 1.0, 0.0});
}

struct UniformCase {
  double gl;
  double dl;
};

std::vector<UniformCase> oracle_grid() {
  std::vector<UniformCase> cases;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      cases.push_back({0.01 + (3.0 - 0.01) * i / 19.0, 20.0 * j / 19.0});
  return cases;
}

constexpr double kGridLength = 1000.0;

TransferMatrix uniform_run(const UniformCase& c) {
  const auto m = with_coupling(c.gl / kGridLength);
  return propagate(m, UniformProfile{0.773}, kGridLength, 1.0,
                   kCenter + c.dl / kGridLength / kBeta);
}

Outcome uniform_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int bad = 0;
  for (const auto& c : oracle_grid()) {
    const double eta = efficiency(uniform_run(c)).raw;
    const double exact = oracle::eta_uniform(c.dl / kGridLength, c.gl / kGridLength, kGridLength);
    const double err = std::abs(eta - exact);
    if (err > kOracleRel * exact + kOracleAbs) ++bad;
    if (exact > 1e-6) worst = std::max(worst, err / exact);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {bad == 0 && secs < kOracleSeconds,
          fmt("400 cases, %d outside tolerance, max rel err %.2e, %.2f s", bad, worst, secs)};
}

Outcome unitarity() {
  double worst = 0.0;
  for (const auto& c : oracle_grid()) worst = std::max(worst, unitarity_defect(uniform_run(c)));
  const double grid_worst = worst;

  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> len(200.0, 3000.0);
  std::uniform_real_distribution<double> dw(-10.0, 10.0);
  std::uniform_real_distribution<double> pump(0.1, 20.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double L = len(rng);
    const double w = dw(rng);
    TaperProfile p = LinearProfile{0.773, w, L};
    if (k % 2 == 1) p = CosineProfile{0.773, w, L / (1.0 + std::floor(8.0 * unit(rng)))};
    const double bw = std::max(std::abs(w) * kKappa / kBeta, 2.0);
    const auto M = propagate(kModel, p, L, pump(rng), kCenter + 0.5 * bw * off(rng));
    worst = std::max(worst, unitarity_defect(M));
  }
  return {worst < kUnitarity,
          fmt("max |MM^+ - I| = %.2e (oracle grid %.2e, 50 random tapers)", worst, grid_worst)};
}

// Mean efficiency over the central half of the FWHM window.
double flat_top(const Spectrum& sp, double width) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < sp.etas.size(); ++i)
    if (std::abs(sp.lambdas_nm[i] - kCenter) <= width / 4.0) {
      sum += sp.etas[i];
      ++n;
    }
  return sum / n;
}

struct LzRatios {
  double measured; // window from the spectrum's FWHM
  double estimated; // window from the bandwidth estimate
};

LzRatios lz_ratios(double dw, double L) {
  const auto s = linear(dw, L);
  const auto sp = compute_spectrum(s, default_grid(s));
  const double lz = eta_landau_zener(kG, kKappa * dw / L);
  return {flat_top(sp, fwhm(sp)) / lz, flat_top(sp, bandwidth_estimate(dw, kKappa, kBeta)) / lz};
}

Outcome landau_zener() {
  bool ok = true;
  std::string detail = "flat-top/LZ at L=1000:";
  std::string alt;
  for (double dw : {2.0, 4.0, 8.0}) {
    const auto r = lz_ratios(dw, 1000.0);
    ok = ok && std::abs(r.measured - 1.0) <= kLzRel;
    detail += fmt(" dw=%g %.3f", dw, r.measured);
    alt += fmt(" %.3f", r.estimated);
  }
  detail += " (estimate window" + alt + fmt("; L=10000, dw=8: %.3f)", lz_ratios(8.0, 10000.0).measured);
  return {ok, detail};
}

Outcome area_law() {
  const std::vector<double> dws{0.0, 2.0, 4.0, 8.0};
  const auto rs = area_sweep_delta_w(kModel, 1000.0, 1.0, dws);
  const double analytic = area_uniform(kG, 1000.0, kBeta).value_nm;
  double lo = rs[0].observed;
  double hi = lo;
  double mean = 0.0;
  double worst = 0.0;
  bool resolved = true;
  std::string values;
  for (const auto& r : rs) {
    lo = std::min(lo, r.observed);
    hi = std::max(hi, r.observed);
    mean += r.observed / rs.size();
    worst = std::max(worst, std::abs(r.observed / analytic - 1.0));
    resolved = resolved && r.warnings.empty();
    values += fmt(" %.5f", r.observed);
  }
  const double spread = (hi - lo) / mean;
  return {resolved && spread < kAreaSpread && worst < kAreaAnalytic &&
              std::abs(analytic - 0.1114) < 1e-12,
          fmt("areas%s nm, spread %.2f%%, max dev from %.4f nm %.2f%%", values.c_str(),
              100.0 * spread, analytic, 100.0 * worst)};
}

Outcome bandwidth_linearity() {
  const std::vector<double> dws{2.0, 4.0, 6.0, 8.0, 10.0};
  SweepOptions o;
  o.observable = Observable::Fwhm;
  const auto rs = sweep_delta_w(kModel, 10000.0, 1.0, dws, kCenter, o);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (const auto& r : rs) {
    sxy += r.value * r.observed;
    sxx += r.value * r.value;
    syy += r.observed * r.observed;
  }
  const double slope = sxy / sxx;
  double ss_res = 0.0;
  for (const auto& r : rs) ss_res += std::pow(r.observed - slope * r.value, 2);
  const double r2 = 1.0 - ss_res / syy; // uncentered: the fit has no intercept
  const double predicted = kKappa / kBeta;
  const double rel = std::abs(slope / predicted - 1.0);
  return {r2 > kFwhmR2 && rel <= kFwhmSlopeRel,
          fmt("L=10000: slope %.4f nm/nm vs %.4f (%.1f%%), R^2 %.5f", slope, predicted,
              100.0 * rel, r2)};
}

Outcome saturation() {
  const std::vector<double> pumps{0.5, 1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 25, 30, 35, 40};
  const double t0 = saturation_threshold(area_sweep_pump(kModel, 1000.0, 0.0, pumps));
  const double t4 = saturation_threshold(area_sweep_pump(kModel, 1000.0, 4.0, pumps));
  const std::vector<double> dws{0.0, 4.0};
  const auto far = area_sweep_delta_w(kModel, 10000.0, 1.0, dws);
  return {t4 > t0 && far[1].observed > far[0].observed,
          fmt("L=1000 threshold dw=0 %g W, dw=4 %g W; L=10000 area dw=0 %.4f nm, dw=4 %.4f nm", t0,
              t4, far[0].observed, far[1].observed)};
}

Outcome periodicity() {
  const double T = 500.0;
  const std::size_t per_period = 200;
  const TaperProfile cos = CosineProfile{0.773, 4.0, T};
  double worst = 0.0;
  for (double lambda : {kCenter, kCenter + 3.6, kCenter - 7.0}) {
    PropagationSettings one;
    one.step_count = per_period;
    const auto mt = propagate(kModel, cos, T, 1.0, lambda, one);
    for (unsigned n : {2U, 8U, 32U}) {
      PropagationSettings full;
      full.step_count = per_period * n;
      const auto ml = propagate(kModel, cos, T * n, 1.0, lambda, full);
      worst = std::max(worst, max_abs_difference(ml, matrix_power(mt, n)));
    }
  }

  const double L = 3000.0;
  const Scenario a{kModel, CosineProfile{0.773, 2.0, T}, L, 1.0, {}};
  const Scenario b{kModel, CosineProfile{0.773, 4.0, T}, L, 1.0, {}};
  const auto grid = default_grid(b);
  const auto pa = find_peaks(compute_spectrum(a, grid), 0.15);
  const auto pb = find_peaks(compute_spectrum(b, grid), 0.15);
  double shift = 0.0;
  for (const auto& p : pa) {
    double best = 1e9;
    for (const auto& q : pb) best = std::min(best, std::abs(p.lambda_nm - q.lambda_nm));
    shift = std::max(shift, best);
  }
  return {worst < kPeriodEntry && !pa.empty() && shift <= grid.spacing(),
          fmt("max entry diff %.2e; %zu/%zu peaks, max shift %.4f nm (grid %.4f nm)", worst,
              pa.size(), pb.size(), shift, grid.spacing())};
}

Outcome convergence() {
  // uniform guide against the closed form, and a linear taper against a
  // 64x finer run
  const double L = 1000.0;
  const auto m = with_coupling(1.2e-3);
  const double lambda = kCenter + 6.0 / L / kBeta;
  const auto exact = oracle::uniform_matrix(6.0 / L, 1.2e-3, L)[2];
  auto err_uniform = [&](std::size_t n) {
    PropagationSettings s;
    s.step_count = n;
    return std::abs(propagate(m, UniformProfile{0.773}, L, 1.0, lambda, s).m21 - exact);
  };
  const double p_uniform = std::log10(err_uniform(40) / err_uniform(400));

  const TaperProfile lin = LinearProfile{0.773, 8.0, L};
  auto run = [&](std::size_t n) {
    PropagationSettings s;
    s.step_count = n;
    return propagate(kModel, lin, L, 9.0, kCenter + 2.0, s).m21;
  };
  const auto fine = run(25600);
  const double p_taper = std::log10(std::abs(run(40) - fine) / std::abs(run(400) - fine));
  return {p_uniform >= kOrder && p_taper >= kOrder,
          fmt("order over n=40..400: uniform %.3f, linear taper %.3f", p_uniform, p_taper)};
}

Outcome loss() {
  const double L = 10000.0;
  const double alpha = 1.0; // m^-1
  const double decay = std::exp(-alpha * 1e-6 * L);
  PropagationSettings lossy;
  lossy.loss_alpha1_per_m = alpha;
  lossy.loss_alpha3_per_m = alpha;
  double norm_err = 0.0;
  double eta_err = 0.0;
  for (double d : {0.0, 0.5, -1.5}) {
    const auto m0 = propagate(kModel, UniformProfile{0.773}, L, 1.0, kCenter + d);
    const auto m1 = propagate(kModel, UniformProfile{0.773}, L, 1.0, kCenter + d, lossy);
    for (const StateVector in : {StateVector{1.0, 0.0}, StateVector{0.0, 1.0},
                                 StateVector{cplx(0.6, 0.0), cplx(0.0, 0.8)}})
      norm_err = std::max(norm_err, std::abs(propagate_state(m1, in).norm() - decay * in.norm()));
    eta_err = std::max(eta_err, std::abs(efficiency(m1).raw / efficiency(m0).raw - decay));
  }
  return {norm_err < kLossAbs && eta_err < kLossAbs,
          fmt("exp(-aL) = %.9f; max norm err %.2e, max eta-ratio err %.2e", decay, norm_err,
              eta_err)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "taperconv_acceptance";
  std::filesystem::create_directories(dir);
  std::string detail;
  bool ok = true;
  for (const char* cfg : {"sweep_length.json", "sweep_delta_w.json"}) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "4"}) {
      const auto out = dir / (std::string(threads) + "_" + cfg + ".out");
      std::filesystem::remove(out);
      const std::string cmd = std::string("TAPERCONV_THREADS=") + threads + " \"" +
                              TAPERCONV_CLI + "\" sweep -c \"" + TAPERCONV_DATA + "/" + cfg +
                              "\" -o \"" + out.string() + "\" 2>/dev/null";
      const int rc = std::system(cmd.c_str());
      ok = ok && rc == 0;
      outputs.push_back(slurp(out));
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    ok = ok && same;
    detail += fmt("%s%s %zu bytes %s", detail.empty() ? "" : "; ", cfg, outputs[0].size(),
                  same ? "identical" : "DIFFER");
  }
  return {ok, detail + " (threads 1 vs 4)"};
}

} // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"uniform oracle", uniform_oracle},
      {"unitarity", unitarity},
      {"Landau-Zener plateau", landau_zener},
      {"area law", area_law},
      {"bandwidth linearity", bandwidth_linearity},
      {"saturation ordering", saturation},
      {"periodicity", periodicity},
      {"convergence order", convergence},
      {"loss model", loss},
      {"determinism", determinism},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, check] : criteria) {
    ++k;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    std::printf("%s  %2d %-22s %s\n", o.passed ? "PASS" : "FAIL", k, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", k - failed, k);
  return failed == 0 ? 0 : 1;
}
