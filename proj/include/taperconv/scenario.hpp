#pragma once

#include "taperconv/dispersion.hpp"
#include "taperconv/profile.hpp"
#include "taperconv/propagation.hpp"

namespace taperconv {

// Everything a single-wavelength propagation depends on except the
// wavelength itself.
struct Scenario {
  DispersionModel model;
  TaperProfile profile;
  double length_um;
  double pump_power_w;
  PropagationSettings settings;
};

inline TransferMatrix propagate(const Scenario& s, double lambda3_nm) {
  return propagate(s.model, s.profile, s.length_um, s.pump_power_w, lambda3_nm, s.settings);
}

// Phase-matched width at the idler center, falling back to the profile's
// input width when the model has no crossing.
double reference_width(const Scenario& s);

// -d(delta_beta)/dw per nm of width at the reference width.
double kappa_at_reference(const Scenario& s);

// d(delta_beta)/d(lambda3) at the reference width.
double dbeta_dlambda_at_reference(const Scenario& s);

// Peak-to-peak width modulation of the profile in nm.
double width_excursion_nm(const TaperProfile& profile);

} // namespace taperconv
