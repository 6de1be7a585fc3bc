#pragma once

#include <complex>
#include <cstddef>
#include <optional>

namespace taperconv {

class DispersionModel;
class TaperProfile;

using cplx = std::complex<double>;

// Row-major 2x2 complex matrix.
struct Matrix2 {
  cplx m11{1.0};
  cplx m12{0.0};
  cplx m21{0.0};
  cplx m22{1.0};

  static constexpr Matrix2 identity() noexcept { return {}; }
  static constexpr Matrix2 zero() noexcept { return {cplx{}, cplx{}, cplx{}, cplx{}}; }

  Matrix2 adjoint() const noexcept {
    return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
  }
  cplx determinant() const noexcept { return m11 * m22 - m12 * m21; }

  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) noexcept {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
  friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) noexcept {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
  }
  friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) noexcept {
    return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
  }
  friend Matrix2 operator*(cplx s, const Matrix2& a) noexcept {
    return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
  }
  friend Matrix2 operator*(double s, const Matrix2& a) noexcept {
    return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
  }
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

using TransferMatrix = Matrix2;
using Hamiltonian = Matrix2;

// Largest entry modulus of a - b.
double max_abs_difference(const Matrix2& a, const Matrix2& b) noexcept;

// max |(M M^dagger - I)_ij|
double unitarity_defect(const TransferMatrix& m) noexcept;

Matrix2 matrix_power(Matrix2 m, unsigned n) noexcept;

struct StateVector {
  cplx a1; // signal
  cplx a3; // idler

  double norm() const noexcept { return std::norm(a1) + std::norm(a3); }
};

inline constexpr std::size_t kMinExplicitSteps = 16;
inline constexpr std::size_t kMaxSteps = 10'000'000;

struct PropagationSettings {
  // Fixed RK4 step count over the whole length; nullopt selects the auto rule.
  std::optional<std::size_t> step_count;
  // Power attenuation coefficients in m^-1; the amplitude decays at half
  // this rate.
  double loss_alpha1_per_m = 0.0;
  double loss_alpha3_per_m = 0.0;

  void validate() const;
  friend bool operator==(const PropagationSettings&, const PropagationSettings&) = default;
};

// Local-frame coupling matrix with loss on the diagonal:
//   [[dbeta/2 + i a1/2, g*], [g, -dbeta/2 + i a3/2]]
// Used as dM/dz = i H M, so positive alpha attenuates. alpha in um^-1.
Hamiltonian hamiltonian(double delta_beta, double g, double alpha1_per_um = 0.0,
                        double alpha3_per_um = 0.0) noexcept;

// Step count the integrator uses for these inputs. Auto rule:
//   h = min(L/2000, T/64 for periodic profiles, 0.02 / max_z |Omega(z)|)
// with Omega = sqrt(dbeta^2/4 + g^2) sampled at 256 points.
// Throws ResourceError above kMaxSteps.
std::size_t resolve_step_count(const DispersionModel& model, const TaperProfile& profile,
                               double length_um, double pump_power_w, double lambda3_nm,
                               const PropagationSettings& settings);

// Solves dM/dz = i H(z) M, M(0) = I, on [0, L] with fixed-step classic RK4.
TransferMatrix propagate(const DispersionModel& model, const TaperProfile& profile,
                         double length_um, double pump_power_w, double lambda3_nm,
                         const PropagationSettings& settings = {});

struct Efficiency {
  double value; // clamped to [0, 1]
  double raw;   // |m21|^2 as integrated
};

Efficiency efficiency(const TransferMatrix& m) noexcept;

StateVector propagate_state(const TransferMatrix& m, const StateVector& input) noexcept;

} // namespace taperconv
