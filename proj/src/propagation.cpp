#include "taperconv/propagation.hpp"

#include "taperconv/dispersion.hpp"
#include "taperconv/errors.hpp"
#include "taperconv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace taperconv {

double max_abs_difference(const Matrix2& a, const Matrix2& b) noexcept {
  return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21),
                   std::abs(a.m22 - b.m22)});
}

double unitarity_defect(const TransferMatrix& m) noexcept {
  return max_abs_difference(m * m.adjoint(), Matrix2::identity());
}

Matrix2 matrix_power(Matrix2 m, unsigned n) noexcept {
  Matrix2 result = Matrix2::identity();
  while (n > 0) {
    if (n & 1U) result = result * m;
    m = m * m;
    n >>= 1U;
  }
  return result;
}

void PropagationSettings::validate() const {
  if (step_count && *step_count < kMinExplicitSteps)
    throw InputError("explicit step_count must be >= " + std::to_string(kMinExplicitSteps));
  if (step_count && *step_count > kMaxSteps)
    throw ResourceError("step_count " + std::to_string(*step_count) + " exceeds limit of " +
                        std::to_string(kMaxSteps) + " steps; request fewer steps");
  if (!(loss_alpha1_per_m >= 0.0) || !(loss_alpha3_per_m >= 0.0))
    throw InputError("loss coefficients must be >= 0");
}

Hamiltonian hamiltonian(double delta_beta, double g, double alpha1_per_um,
                        double alpha3_per_um) noexcept {
  const cplx gc{g, 0.0};
  return {cplx{0.5 * delta_beta, 0.5 * alpha1_per_um}, std::conj(gc), gc,
          cplx{-0.5 * delta_beta, 0.5 * alpha3_per_um}};
}

namespace {

// RK4 loses |R(iy)|^2 ~ 1 - y^6/72 per step of phase y; at 0.05 rad a few
// thousand steps already drift past 1e-8 from unitary, 0.02 keeps it near 1e-10.
constexpr double kMaxPhasePerStep = 0.02;
constexpr double kMinStepsPerLength = 2000.0;
constexpr double kMinStepsPerPeriod = 64.0;
constexpr int kRateSamples = 256;

// Coupling matrix along the guide for one wavelength.
struct LocalGenerator {
  const DispersionModel& model;
  const TaperProfile& profile;
  double pump_power_w;
  double lambda3_nm;
  double alpha1_per_um;
  double alpha3_per_um;

  Hamiltonian operator()(double z_um) const {
    const double w = width_at(profile, z_um);
    return hamiltonian(delta_beta(model, w, lambda3_nm), coupling_g(model, w, pump_power_w),
                       alpha1_per_um, alpha3_per_um);
  }
};

// i * H * M
inline Matrix2 rate(const Hamiltonian& h, const Matrix2& m) noexcept {
  return cplx{0.0, 1.0} * (h * m);
}

} // namespace

std::size_t resolve_step_count(const DispersionModel& model, const TaperProfile& profile,
                               double length_um, double pump_power_w, double lambda3_nm,
                               const PropagationSettings& settings) {
  settings.validate();
  if (!(length_um > 0.0)) throw DomainError("propagation length must be > 0");
  if (settings.step_count) return *settings.step_count;

  double h = length_um / kMinStepsPerLength;
  if (const auto period = profile.period_um()) h = std::min(h, *period / kMinStepsPerPeriod);

  double max_rate = 0.0;
  for (int i = 0; i < kRateSamples; ++i) {
    const double z = length_um * static_cast<double>(i) / (kRateSamples - 1);
    const double w = width_at(profile, z);
    const double db = delta_beta(model, w, lambda3_nm);
    const double g = coupling_g(model, w, pump_power_w);
    max_rate = std::max(max_rate, std::sqrt(0.25 * db * db + g * g));
  }
  if (max_rate > 0.0) h = std::min(h, kMaxPhasePerStep / max_rate);

  const double steps = std::ceil(length_um / h);
  if (!(steps <= static_cast<double>(kMaxSteps)))
    throw ResourceError("step-size rule requires " + std::to_string(steps) +
                        " steps (limit " + std::to_string(kMaxSteps) +
                        "); use a shorter length, coarser grid or explicit step_count");
  return static_cast<std::size_t>(steps);
}

TransferMatrix propagate(const DispersionModel& model, const TaperProfile& profile,
                         double length_um, double pump_power_w, double lambda3_nm,
                         const PropagationSettings& settings) {
  const std::size_t steps =
      resolve_step_count(model, profile, length_um, pump_power_w, lambda3_nm, settings);
  const LocalGenerator generator{model,
                                 profile,
                                 pump_power_w,
                                 lambda3_nm,
                                 settings.loss_alpha1_per_m * 1e-6,
                                 settings.loss_alpha3_per_m * 1e-6};

  const double n = static_cast<double>(steps);
  const double h = length_um / n;
  Matrix2 m = Matrix2::identity();
  Hamiltonian h_start = generator(0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double kd = static_cast<double>(k);
    const Hamiltonian h_mid = generator(length_um * (kd + 0.5) / n);
    const Hamiltonian h_end = generator(k + 1 == steps ? length_um : length_um * (kd + 1.0) / n);

    const Matrix2 k1 = rate(h_start, m);
    const Matrix2 k2 = rate(h_mid, m + (0.5 * h) * k1);
    const Matrix2 k3 = rate(h_mid, m + (0.5 * h) * k2);
    const Matrix2 k4 = rate(h_end, m + h * k3);
    m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    h_start = h_end;
  }
  return m;
}

Efficiency efficiency(const TransferMatrix& m) noexcept {
  const double raw = std::norm(m.m21);
  return {std::clamp(raw, 0.0, 1.0), raw};
}

StateVector propagate_state(const TransferMatrix& m, const StateVector& input) noexcept {
  return {m.m11 * input.a1 + m.m12 * input.a3, m.m21 * input.a1 + m.m22 * input.a3};
}

} // namespace taperconv
