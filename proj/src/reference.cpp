#include "taperconv/reference.hpp"

#include "taperconv/dispersion.hpp"
#include "taperconv/profile.hpp"

#include <cmath>

namespace taperconv::reference {

namespace {

struct State {
  Matrix2 b;
  double phi;
};

struct Derivative {
  Matrix2 db;
  double dphi;
};

State advance(const State& s, const Derivative& d, double h) {
  return {s.b + h * d.db, s.phi + h * d.dphi};
}

} // namespace

TransferMatrix propagate_interaction_picture(const DispersionModel& model,
                                             const TaperProfile& profile, double length_um,
                                             double pump_power_w, double lambda3_nm,
                                             const PropagationSettings& settings) {
  const std::size_t steps =
      resolve_step_count(model, profile, length_um, pump_power_w, lambda3_nm, settings);
  const double a1 = settings.loss_alpha1_per_m * 1e-6;
  const double a3 = settings.loss_alpha3_per_m * 1e-6;
  const cplx i{0.0, 1.0};

  const auto f = [&](double z, const State& s) {
    const double w = width_at(profile, z);
    const double db = delta_beta(model, w, lambda3_nm);
    const cplx g{coupling_g(model, w, pump_power_w), 0.0};
    const cplx down = std::exp(-i * s.phi);
    const cplx up = std::conj(down);
    const Matrix2& b = s.b;
    // Row 1 couples to row 3 and vice versa; loss stays diagonal.
    const Matrix2 db_dz{i * std::conj(g) * down * b.m21 - 0.5 * a1 * b.m11,
                        i * std::conj(g) * down * b.m22 - 0.5 * a1 * b.m12,
                        i * g * up * b.m11 - 0.5 * a3 * b.m21,
                        i * g * up * b.m12 - 0.5 * a3 * b.m22};
    return Derivative{db_dz, db};
  };

  const double n = static_cast<double>(steps);
  const double h = length_um / n;
  State s{Matrix2::identity(), 0.0};
  for (std::size_t k = 0; k < steps; ++k) {
    const double z0 = length_um * static_cast<double>(k) / n;
    const double zm = length_um * (static_cast<double>(k) + 0.5) / n;
    const double z1 = k + 1 == steps ? length_um : length_um * (static_cast<double>(k) + 1.0) / n;
    const Derivative k1 = f(z0, s);
    const Derivative k2 = f(zm, advance(s, k1, 0.5 * h));
    const Derivative k3 = f(zm, advance(s, k2, 0.5 * h));
    const Derivative k4 = f(z1, advance(s, k3, h));
    s.b = s.b + (h / 6.0) * (k1.db + 2.0 * k2.db + 2.0 * k3.db + k4.db);
    s.phi += (h / 6.0) * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
  }
  return s.b;
}

} // namespace taperconv::reference
