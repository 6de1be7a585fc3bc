#include "taperconv/dispersion.hpp"

#include "taperconv/diagnostics.hpp"
#include "taperconv/errors.hpp"

// pchip.hpp in Boost 1.74 calls isnan unqualified inside boost::math.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace taperconv {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

} // namespace

DesignWavelengths DesignWavelengths::from_signal_pump(double lambda1_nm, double lambda2_nm) {
  DesignWavelengths d;
  d.lambda1_nm = lambda1_nm;
  d.lambda2_nm = lambda2_nm;
  d.lambda3_center_nm = 1.0 / (1.0 / lambda1_nm + 1.0 / lambda2_nm);
  return d;
}

void DesignWavelengths::validate() const {
  if (!(lambda1_nm > 0.0) || !(lambda2_nm > 0.0) || !(lambda3_center_nm > 0.0))
    throw InputError("design wavelengths must be positive");
  const double mismatch = std::abs(1.0 / lambda3_center_nm - 1.0 / lambda1_nm - 1.0 / lambda2_nm);
  if (mismatch > kEnergyConservationTolerance)
    throw InputError("idler center " + fmt(lambda3_center_nm) +
                     " nm violates energy conservation (1/l3 - 1/l1 - 1/l2 = " + fmt(mismatch) +
                     " nm^-1)");
}

void CouplingSpec::validate() const {
  if (!(g_ref >= 0.0)) throw InputError("g_ref must be >= 0");
  if (!(p_ref_w > 0.0)) throw InputError("p_ref must be > 0");
  if (!std::isfinite(g_slope_per_nm)) throw InputError("g_slope must be finite");
}

void SyntheticDispersion::validate() const {
  design.validate();
  if (!(w0_um > 0.0)) throw InputError("w0 must be > 0");
  if (!(kappa_w > 0.0)) throw InputError("kappa_w must be > 0");
  if (!(dbeta_dlambda > 0.0)) throw InputError("dbeta_dlambda must be > 0");
}

// ---------------------------------------------------------------------------
// TabulatedDispersion

struct TabulatedDispersion::Interpolants {
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  Pchip n1;
  Pchip n2;
  Pchip n3;
};

namespace {

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

Pchip make_pchip(const std::vector<IndexSample>& s, double IndexSample::*field) {
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(s.size());
  y.reserve(s.size());
  for (const auto& row : s) {
    x.push_back(row.w_um);
    y.push_back(row.*field);
  }
  return Pchip(std::move(x), std::move(y));
}

} // namespace

TabulatedDispersion::TabulatedDispersion(std::vector<IndexSample> samples, DesignWavelengths design)
    : samples_(std::move(samples)), design_(design) {
  design_.validate();
  if (samples_.size() < 4)
    throw InputError("tabulated dispersion needs at least 4 samples, got " +
                     std::to_string(samples_.size()));
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.w_um) || !std::isfinite(s.n1) || !std::isfinite(s.n2) ||
        !std::isfinite(s.n3))
      throw InputError("non-finite value in sample " + std::to_string(i));
    if (!(s.w_um > 0.0)) throw InputError("widths must be positive");
    if (i > 0 && !(s.w_um > samples_[i - 1].w_um))
      throw InputError("widths must be strictly increasing (sample " + std::to_string(i) + ")");
  }
  interp_ = std::make_shared<const Interpolants>(Interpolants{
      make_pchip(samples_, &IndexSample::n1), make_pchip(samples_, &IndexSample::n2),
      make_pchip(samples_, &IndexSample::n3)});
}

void TabulatedDispersion::check_range(double w_um) const {
  if (!(w_um >= w_min() && w_um <= w_max()))
    throw RangeError("width " + fmt(w_um) + " um outside tabulated range [" + fmt(w_min()) + ", " +
                     fmt(w_max()) + "] um");
}

EffectiveIndices TabulatedDispersion::indices(double w_um) const {
  check_range(w_um);
  return {interp_->n1(w_um), interp_->n2(w_um), interp_->n3(w_um)};
}

EffectiveIndices TabulatedDispersion::index_slopes(double w_um) const {
  check_range(w_um);
  return {interp_->n1.prime(w_um), interp_->n2.prime(w_um), interp_->n3.prime(w_um)};
}

// ---------------------------------------------------------------------------
// DispersionModel

DispersionModel::DispersionModel(SyntheticDispersion dispersion, CouplingSpec coupling)
    : dispersion_(dispersion), coupling_(coupling), reference_width_um_(dispersion.w0_um) {
  dispersion.validate();
  coupling_.validate();
}

DispersionModel::DispersionModel(TabulatedDispersion dispersion, CouplingSpec coupling)
    : dispersion_(std::move(dispersion)), coupling_(coupling),
      reference_width_um_(std::numeric_limits<double>::quiet_NaN()) {
  coupling_.validate();
  try {
    reference_width_um_ = phase_matched_width(*this, design().lambda3_center_nm);
  } catch (const SolveError&) {
    // left as NaN; only matters when g_slope != 0
  }
}

const DesignWavelengths& DispersionModel::design() const noexcept {
  return std::visit([](const auto& d) -> const DesignWavelengths& {
    if constexpr (std::is_same_v<std::decay_t<decltype(d)>, SyntheticDispersion>)
      return d.design;
    else
      return d.design();
  }, dispersion_);
}

std::pair<double, double> DispersionModel::width_domain() const noexcept {
  if (const auto* t = tabulated()) return {t->w_min(), t->w_max()};
  return {0.0, std::numeric_limits<double>::infinity()};
}

namespace {

void check_synthetic_width(double w_um) {
  if (!(w_um > 0.0) || !std::isfinite(w_um))
    throw RangeError("width " + fmt(w_um) + " um outside valid interval (0, inf) um");
}

void check_wavelength(double lambda3_nm) {
  if (!(lambda3_nm > 0.0)) throw DomainError("idler wavelength must be > 0");
}

} // namespace

double delta_beta(const DispersionModel& model, double w_um, double lambda3_nm) {
  check_wavelength(lambda3_nm);
  const double detune = lambda3_nm - model.design().lambda3_center_nm;
  if (const auto* s = model.synthetic()) {
    check_synthetic_width(w_um);
    return -s->kappa_w * (w_um - s->w0_um) * 1000.0 + s->dbeta_dlambda * detune;
  }
  const auto& t = *model.tabulated();
  const auto n = t.indices(w_um);
  const auto& d = t.design();
  const double at_center = kTwoPi * (n.n1 / (d.lambda1_nm * 1e-3) + n.n2 / (d.lambda2_nm * 1e-3) -
                                     n.n3 / (d.lambda3_center_nm * 1e-3));
  return at_center + dbeta_dlambda_from_indices(t, w_um) * detune;
}

double ddelta_beta_dw(const DispersionModel& model, double w_um, double lambda3_nm) {
  check_wavelength(lambda3_nm);
  if (const auto* s = model.synthetic()) {
    check_synthetic_width(w_um);
    return -s->kappa_w * 1000.0;
  }
  const auto& t = *model.tabulated();
  const auto dn = t.index_slopes(w_um);
  const auto& d = t.design();
  const double l3 = d.lambda3_center_nm;
  const double at_center = kTwoPi * (dn.n1 / (d.lambda1_nm * 1e-3) + dn.n2 / (d.lambda2_nm * 1e-3) -
                                     dn.n3 / (l3 * 1e-3));
  const double dslope = kTwoPi * (dn.n3 - dn.n1) / (l3 * l3) * 1000.0;
  return at_center + dslope * (lambda3_nm - l3);
}

double dbeta_dlambda(const DispersionModel& model, double w_um) {
  if (const auto* s = model.synthetic()) {
    check_synthetic_width(w_um);
    return s->dbeta_dlambda;
  }
  return dbeta_dlambda_from_indices(*model.tabulated(), w_um);
}

double dbeta_dlambda_from_indices(const TabulatedDispersion& table, double w_um) {
  const auto n = table.indices(w_um);
  const double l3 = table.design().lambda3_center_nm;
  // rad/nm^2 -> rad/um/nm
  return kTwoPi * (n.n3 - n.n1) / (l3 * l3) * 1000.0;
}

double coupling_g(const DispersionModel& model, double w_um, double pump_power_w) {
  if (!(pump_power_w >= 0.0))
    throw DomainError("pump power must be >= 0, got " + fmt(pump_power_w) + " W");
  const auto& c = model.coupling();
  const double base = c.g_ref * std::sqrt(pump_power_w / c.p_ref_w);
  if (c.g_slope_per_nm == 0.0) return base;

  const double w_ref = model.reference_width_um();
  if (std::isnan(w_ref))
    throw DomainError("g_slope requires a reference width, but the dispersion table has no "
                      "phase-matching crossing");
  const double factor = 1.0 + c.g_slope_per_nm * (w_um - w_ref) * 1000.0;
  if (factor < 0.0) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
      warn("coupling slope drives g negative at w = " + fmt(w_um) +
           " um; clamped to 0 (further occurrences not reported)");
    return 0.0;
  }
  return base * factor;
}

double phase_matched_width(const DispersionModel& model, double lambda3_nm) {
  constexpr double kResidual = 1e-10;
  check_wavelength(lambda3_nm);

  if (const auto* s = model.synthetic()) {
    const double w = s->w0_um +
                     s->dbeta_dlambda * (lambda3_nm - s->design.lambda3_center_nm) / (s->kappa_w * 1000.0);
    if (!(w > 0.0))
      throw SolveError("no positive phase-matched width at " + fmt(lambda3_nm) + " nm");
    return w;
  }

  const auto [lo0, hi0] = model.width_domain();
  double lo = lo0;
  double hi = hi0;
  double f_lo = delta_beta(model, lo, lambda3_nm);
  const double f_hi = delta_beta(model, hi, lambda3_nm);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw SolveError("delta_beta has no sign change over [" + fmt(lo) + ", " + fmt(hi) +
                     "] um at " + fmt(lambda3_nm) + " nm");

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f_mid = delta_beta(model, mid, lambda3_nm);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  mid = 0.5 * (lo + hi);
  const double residual = std::abs(delta_beta(model, mid, lambda3_nm));
  if (residual >= kResidual)
    throw SolveError("bisection stalled with residual " + fmt(residual) + " rad/um");
  return mid;
}

// ---------------------------------------------------------------------------
// CSV ingestion

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_field(std::string_view field, std::size_t line, const char* name) {
  field = trim(field);
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end || field.empty() || !std::isfinite(v))
    throw ParseError("malformed value '" + std::string(field) + "' for " + name, line);
  return v;
}

} // namespace

TabulatedDispersion parse_tabulated(std::istream& in, const DesignWavelengths& design) {
  std::vector<IndexSample> rows;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "w_um,n1,n2,n3")
        throw ParseError("expected header 'w_um,n1,n2,n3', got '" + std::string(line) + "'",
                         line_no);
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4)
      throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), line_no);
    IndexSample s{parse_field(fields[0], line_no, "w_um"), parse_field(fields[1], line_no, "n1"),
                  parse_field(fields[2], line_no, "n2"), parse_field(fields[3], line_no, "n3")};
    if (!(s.w_um > 0.0)) throw ParseError("width must be positive", line_no);
    if (!rows.empty()) {
      if (s.w_um == rows.back().w_um)
        throw ParseError("duplicate width " + fmt(s.w_um) + " um", line_no);
      if (s.w_um < rows.back().w_um)
        throw ParseError("widths not strictly increasing (" + fmt(s.w_um) + " after " +
                             fmt(rows.back().w_um) + ")",
                         line_no);
    }
    rows.push_back(s);
  }
  if (!header_seen) throw ParseError("missing header 'w_um,n1,n2,n3'", line_no);
  if (rows.size() < 4)
    throw ParseError("need at least 4 data rows, got " + std::to_string(rows.size()), line_no);
  return TabulatedDispersion(std::move(rows), design);
}

TabulatedDispersion load_tabulated(const std::filesystem::path& path,
                                   const DesignWavelengths& design) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dispersion table " + path.string(), 0);
  try {
    return parse_tabulated(in, design);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void write_tabulated(std::ostream& out, const std::vector<IndexSample>& samples) {
  out << "w_um,n1,n2,n3\n";
  out << std::setprecision(17);
  for (const auto& s : samples) out << s.w_um << ',' << s.n1 << ',' << s.n2 << ',' << s.n3 << '\n';
}

std::vector<IndexSample> synthetic_index_samples(const SyntheticDispersion& model, double w_min_um,
                                                 double w_max_um, std::size_t rows) {
  model.validate();
  if (rows < 4) throw InputError("need at least 4 rows");
  if (!(w_min_um > 0.0) || !(w_max_um > w_min_um)) throw InputError("invalid width interval");

  const auto& d = model.design;
  const double l1 = d.lambda1_nm * 1e-3;
  const double l2 = d.lambda2_nm * 1e-3;
  const double l3 = d.lambda3_center_nm * 1e-3;
  // n3 - n1 fixed so that 2*pi*(n3 - n1)/l3^2 matches dbeta_dlambda.
  const double contrast =
      model.dbeta_dlambda * d.lambda3_center_nm * d.lambda3_center_nm / (kTwoPi * 1000.0);

  std::vector<IndexSample> out;
  out.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double w = w_min_um + (w_max_um - w_min_um) * static_cast<double>(i) /
                                    static_cast<double>(rows - 1);
    const double target = -model.kappa_w * (w - model.w0_um) * 1000.0;
    const double n1 = 1.9 + 0.4 * (w - model.w0_um);
    const double n3 = n1 + contrast;
    const double n2 = l2 * (target / kTwoPi - n1 / l1 + n3 / l3);
    out.push_back({w, n1, n2, n3});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Default calibration

double dbeta_dlambda_from_contrast(double index_contrast, double lambda3_nm) {
  return kTwoPi * index_contrast / (lambda3_nm * lambda3_nm) * 1000.0;
}

double calibrated_g_ref(double dbeta_dlambda, double area_nm, double length_um) {
  if (!(dbeta_dlambda > 0.0) || !(area_nm >= 0.0) || !(length_um > 0.0))
    throw DomainError("calibration needs dbeta_dlambda > 0, area >= 0, length > 0");
  return std::sqrt(area_nm * dbeta_dlambda / (kTwoPi * length_um));
}

SyntheticDispersion default_synthetic() {
  SyntheticDispersion s;
  s.design = DesignWavelengths::from_signal_pump(1550.0, 980.0);
  s.w0_um = defaults::kW0Um;
  s.kappa_w = defaults::kKappaW;
  s.dbeta_dlambda = dbeta_dlambda_from_contrast(defaults::kIndexContrast, s.design.lambda3_center_nm);
  return s;
}

DispersionModel default_model() {
  const auto s = default_synthetic();
  CouplingSpec c;
  c.p_ref_w = defaults::kPumpReferenceW;
  c.g_ref = calibrated_g_ref(s.dbeta_dlambda, defaults::kCalibrationAreaNm,
                             defaults::kCalibrationLengthUm);
  return DispersionModel(s, c);
}

} // namespace taperconv
