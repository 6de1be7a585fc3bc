#pragma once

// Independent integrators kept as cross-checks for the production kernels.

#include "taperconv/propagation.hpp"

namespace taperconv::reference {

// Interaction-picture form of the coupled equations,
//   dB1/dz = i g* B3 exp(-i Phi),  dB3/dz = i g B1 exp(+i Phi),  dPhi/dz = dbeta,
// integrated with RK4 on the augmented state (B, Phi) using the same step
// count as propagate(). Returns B(L); |B21|^2 equals |M21|^2 of the
// local-frame propagator since the two differ by diagonal phases.
TransferMatrix propagate_interaction_picture(const DispersionModel& model,
                                             const TaperProfile& profile, double length_um,
                                             double pump_power_w, double lambda3_nm,
                                             const PropagationSettings& settings = {});

} // namespace taperconv::reference
