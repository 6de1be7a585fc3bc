#include "taperconv/scenario.hpp"

#include "taperconv/errors.hpp"

#include <algorithm>
#include <cmath>

namespace taperconv {

double reference_width(const Scenario& s) {
  const double w = s.model.reference_width_um();
  if (!std::isnan(w)) return w;
  return width_at(s.profile, 0.0);
}

double kappa_at_reference(const Scenario& s) {
  return -ddelta_beta_dw(s.model, reference_width(s), s.model.design().lambda3_center_nm) / 1000.0;
}

double dbeta_dlambda_at_reference(const Scenario& s) {
  return dbeta_dlambda(s.model, reference_width(s));
}

double width_excursion_nm(const TaperProfile& profile) {
  if (const auto* l = profile.get_if<LinearProfile>()) return std::abs(l->delta_w_nm);
  if (const auto* c = profile.get_if<CosineProfile>()) return std::abs(c->delta_w_nm);
  if (const auto* p = profile.get_if<PiecewiseProfile>()) {
    const auto [lo, hi] = std::minmax_element(
        p->points.begin(), p->points.end(),
        [](const ProfilePoint& a, const ProfilePoint& b) { return a.w_um < b.w_um; });
    return (hi->w_um - lo->w_um) * 1000.0;
  }
  return 0.0;
}

} // namespace taperconv
