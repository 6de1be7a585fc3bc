#pragma once

// Phase mismatch and coupling strength of the signal/pump/idler mode triplet
// as functions of waveguide width, idler wavelength and pump power.
//
// Units used throughout the library:
//   widths and positions   um
//   wavelengths            nm
//   delta_beta, g          rad/um
//   kappa_w                rad/um per nm of width
//   dbeta_dlambda          rad/um per nm of idler wavelength
//   pump power             W

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

namespace taperconv {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct DesignWavelengths {
  double lambda1_nm = 1550.0; // signal
  double lambda2_nm = 980.0;  // pump
  double lambda3_center_nm = 0.0;

  // Idler center fixed by 1/l3 = 1/l1 + 1/l2.
  static DesignWavelengths from_signal_pump(double lambda1_nm, double lambda2_nm);

  // Throws InputError unless all wavelengths are positive and energy is
  // conserved within kEnergyConservationTolerance (nm^-1).
  void validate() const;
};

inline constexpr double kEnergyConservationTolerance = 1e-9;

struct CouplingSpec {
  double g_ref = 0.0;          // rad/um at p_ref_w
  double p_ref_w = 1.0;
  double g_slope_per_nm = 0.0; // relative change of g per nm of width offset

  void validate() const;
};

struct SyntheticDispersion {
  double w0_um = 0.773;
  double kappa_w = 0.01;
  double dbeta_dlambda = 0.0;
  DesignWavelengths design;

  void validate() const;
};

struct IndexSample {
  double w_um;
  double n1;
  double n2;
  double n3;
};

struct EffectiveIndices {
  double n1;
  double n2;
  double n3;
};

// Effective-index table over width with a shape-preserving cubic interpolant
// per mode. Immutable after construction.
class TabulatedDispersion {
public:
  TabulatedDispersion(std::vector<IndexSample> samples, DesignWavelengths design);

  const std::vector<IndexSample>& samples() const noexcept { return samples_; }
  const DesignWavelengths& design() const noexcept { return design_; }
  double w_min() const noexcept { return samples_.front().w_um; }
  double w_max() const noexcept { return samples_.back().w_um; }

  // Both throw RangeError outside [w_min, w_max].
  EffectiveIndices indices(double w_um) const;
  EffectiveIndices index_slopes(double w_um) const; // dn/dw in um^-1

private:
  void check_range(double w_um) const;

  struct Interpolants;
  std::vector<IndexSample> samples_;
  DesignWavelengths design_;
  std::shared_ptr<const Interpolants> interp_;
};

class DispersionModel {
public:
  DispersionModel(SyntheticDispersion dispersion, CouplingSpec coupling);
  DispersionModel(TabulatedDispersion dispersion, CouplingSpec coupling);

  const DesignWavelengths& design() const noexcept;
  const CouplingSpec& coupling() const noexcept { return coupling_; }

  const SyntheticDispersion* synthetic() const noexcept {
    return std::get_if<SyntheticDispersion>(&dispersion_);
  }
  const TabulatedDispersion* tabulated() const noexcept {
    return std::get_if<TabulatedDispersion>(&dispersion_);
  }

  // Closed interval of admissible widths. Synthetic models accept any
  // positive width.
  std::pair<double, double> width_domain() const noexcept;

  // Width the g_slope factor is referenced to: w0 for synthetic models, the
  // phase-matched width at the idler center for tabulated ones (NaN when the
  // table has no crossing).
  double reference_width_um() const noexcept { return reference_width_um_; }

private:
  std::variant<SyntheticDispersion, TabulatedDispersion> dispersion_;
  CouplingSpec coupling_;
  double reference_width_um_;
};

double delta_beta(const DispersionModel& model, double w_um, double lambda3_nm);

// Partial derivative of delta_beta with respect to width, rad/um per um.
double ddelta_beta_dw(const DispersionModel& model, double w_um, double lambda3_nm);

// d(delta_beta)/d(lambda3) at width w, rad/um per nm.
double dbeta_dlambda(const DispersionModel& model, double w_um);

double dbeta_dlambda_from_indices(const TabulatedDispersion& table, double w_um);

double coupling_g(const DispersionModel& model, double w_um, double pump_power_w);

// Width where delta_beta(w, lambda3) crosses zero; |residual| < 1e-10 rad/um.
// Throws SolveError when the model's width domain has no sign change.
double phase_matched_width(const DispersionModel& model, double lambda3_nm);

// CSV with header `w_um,n1,n2,n3`. '#' lines and blank lines are skipped.
TabulatedDispersion parse_tabulated(std::istream& in, const DesignWavelengths& design);
TabulatedDispersion load_tabulated(const std::filesystem::path& path,
                                   const DesignWavelengths& design);

void write_tabulated(std::ostream& out, const std::vector<IndexSample>& samples);

// Index samples on `rows` equally spaced widths whose tabulated delta_beta
// and dbeta_dlambda reproduce the synthetic model.
std::vector<IndexSample> synthetic_index_samples(const SyntheticDispersion& model, double w_min_um,
                                                 double w_max_um, std::size_t rows);

// Default calibration.
namespace defaults {
inline constexpr double kW0Um = 0.773;
inline constexpr double kKappaW = 0.01;
inline constexpr double kIndexContrast = 0.2; // n3 - n1
inline constexpr double kCalibrationAreaNm = 0.1114;
inline constexpr double kCalibrationLengthUm = 1000.0;
inline constexpr double kPumpReferenceW = 1.0;
} // namespace defaults

// 2*pi*(n3 - n1)/lambda3^2, converted to rad/um per nm.
double dbeta_dlambda_from_contrast(double index_contrast, double lambda3_nm);

// g_ref such that 2*pi*g^2*L/dbeta_dlambda equals area_nm.
double calibrated_g_ref(double dbeta_dlambda, double area_nm, double length_um);

SyntheticDispersion default_synthetic();
DispersionModel default_model();

} // namespace taperconv
