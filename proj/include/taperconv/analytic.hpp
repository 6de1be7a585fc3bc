#pragma once

// Closed-form limits used as oracles for the numerical propagator.

namespace taperconv {

// Unnormalized sinc, sin(x)/x with sinc(0) = 1.
double sinc(double x) noexcept;

// Uniform guide: |g|^2 L^2 sinc^2(sqrt(dbeta^2/4 + |g|^2) L).
double eta_uniform(double delta_beta, double g, double length_um);

// Landau-Zener transfer probability 1 - exp(-2 pi |g|^2 / |d(dbeta)/dz|).
// Throws DomainError when the sweep rate is zero.
double eta_landau_zener(double g, double dbeta_dz_mag);

// Exponent 2 pi |g|^2 / |d(dbeta)/dz| of the above.
double landau_zener_exponent(double g, double dbeta_dz_mag);

// delta_w * kappa_w / dbeta_dlambda, in nm.
double bandwidth_estimate(double delta_w_nm, double kappa_w, double dbeta_dlambda);

struct AreaEstimate {
  double value_nm;
  bool weak_coupling; // g L < 1
};

// 2 pi g^2 L / dbeta_dlambda.
AreaEstimate area_uniform(double g, double length_um, double dbeta_dlambda);

} // namespace taperconv
