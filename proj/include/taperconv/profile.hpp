#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace taperconv {

class DispersionModel;

struct UniformProfile {
  double w0_um;
};

// w(z) = w0 + (delta_w / L) (z - L/2)
struct LinearProfile {
  double w0_um;
  double delta_w_nm;
  double length_um;
};

// w(z) = w0 - (delta_w / 2) cos(2 pi z / T); narrowest at z = 0.
struct CosineProfile {
  double w0_um;
  double delta_w_nm;
  double period_um;
};

struct ProfilePoint {
  double z_um;
  double w_um;
};

// Linear interpolation between points; clamps to the end widths outside.
struct PiecewiseProfile {
  std::vector<ProfilePoint> points;
};

class TaperProfile {
public:
  using Variant = std::variant<UniformProfile, LinearProfile, CosineProfile, PiecewiseProfile>;

  // All constructors validate and throw InputError.
  TaperProfile(UniformProfile p);
  TaperProfile(LinearProfile p);
  TaperProfile(CosineProfile p);
  TaperProfile(PiecewiseProfile p);

  const Variant& variant() const noexcept { return v_; }
  std::string_view kind() const noexcept;

  template <class T> const T* get_if() const noexcept { return std::get_if<T>(&v_); }

  // Modulation period for periodic profiles.
  std::optional<double> period_um() const noexcept;
  // Upper end of the z-range the profile is defined on, if bounded.
  std::optional<double> length_um() const noexcept;

private:
  Variant v_;
};

double width_at(const TaperProfile& profile, double z_um);

// dw/dz (dimensionless, um of width per um of z).
double width_slope(const TaperProfile& profile, double z_um);

// Chain rule d(delta_beta)/dz = d(delta_beta)/dw * dw/dz, rad/um^2.
double dbeta_dz(const TaperProfile& profile, const DispersionModel& model, double z_um,
                double lambda3_nm);

// Same geometry stretched to a new length (Linear keeps delta_w); other
// variants are returned unchanged.
TaperProfile with_length(const TaperProfile& profile, double length_um);

// CSV with header `z_um,w_um`, strictly increasing z.
PiecewiseProfile parse_piecewise(std::istream& in);
PiecewiseProfile load_piecewise(const std::filesystem::path& path);

} // namespace taperconv
