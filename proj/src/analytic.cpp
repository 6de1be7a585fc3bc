#include "taperconv/analytic.hpp"

#include "taperconv/dispersion.hpp"
#include "taperconv/errors.hpp"

#include <cmath>

namespace taperconv {

double sinc(double x) noexcept {
  // Taylor branch keeps full precision near the removable singularity.
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double eta_uniform(double delta_beta, double g, double length_um) {
  if (!(length_um >= 0.0)) throw DomainError("length must be >= 0");
  if (delta_beta == 0.0) {
    const double s = std::sin(std::abs(g) * length_um);
    return s * s;
  }
  const double omega = std::sqrt(0.25 * delta_beta * delta_beta + g * g);
  const double s = sinc(omega * length_um);
  return g * g * length_um * length_um * s * s;
}

double landau_zener_exponent(double g, double dbeta_dz_mag) {
  if (!(dbeta_dz_mag > 0.0))
    throw DomainError("Landau-Zener form needs a nonzero sweep rate |d(dbeta)/dz|");
  return kTwoPi * g * g / dbeta_dz_mag;
}

double eta_landau_zener(double g, double dbeta_dz_mag) {
  return -std::expm1(-landau_zener_exponent(g, dbeta_dz_mag));
}

double bandwidth_estimate(double delta_w_nm, double kappa_w, double dbeta_dlambda) {
  if (!(dbeta_dlambda != 0.0)) throw DomainError("dbeta_dlambda must be nonzero");
  return delta_w_nm * kappa_w / dbeta_dlambda;
}

AreaEstimate area_uniform(double g, double length_um, double dbeta_dlambda) {
  if (!(dbeta_dlambda != 0.0)) throw DomainError("dbeta_dlambda must be nonzero");
  return {kTwoPi * g * g * length_um / dbeta_dlambda, g * length_um < 1.0};
}

} // namespace taperconv
