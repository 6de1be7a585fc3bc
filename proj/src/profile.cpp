#include "taperconv/profile.hpp"

#include "taperconv/diagnostics.hpp"
#include "taperconv/dispersion.hpp"
#include "taperconv/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

namespace taperconv {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

void require_positive_width(double w, const char* what) {
  if (!(w > 0.0) || !std::isfinite(w))
    throw InputError(std::string(what) + " yields non-positive width " + fmt(w) + " um");
}

} // namespace

TaperProfile::TaperProfile(UniformProfile p) : v_(p) {
  require_positive_width(p.w0_um, "uniform profile");
}

TaperProfile::TaperProfile(LinearProfile p) : v_(p) {
  if (!(p.length_um > 0.0)) throw InputError("linear profile length must be > 0");
  if (!std::isfinite(p.delta_w_nm)) throw InputError("linear profile delta_w must be finite");
  require_positive_width(p.w0_um - 0.5e-3 * std::abs(p.delta_w_nm), "linear profile");
}

TaperProfile::TaperProfile(CosineProfile p) : v_(p) {
  if (!(p.period_um > 0.0)) throw InputError("cosine profile period must be > 0");
  if (!std::isfinite(p.delta_w_nm)) throw InputError("cosine profile delta_w must be finite");
  require_positive_width(p.w0_um - 0.5e-3 * std::abs(p.delta_w_nm), "cosine profile");
}

TaperProfile::TaperProfile(PiecewiseProfile p) : v_(std::move(p)) {
  const auto& pts = std::get<PiecewiseProfile>(v_).points;
  if (pts.size() < 2) throw InputError("piecewise profile needs at least 2 points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!std::isfinite(pts[i].z_um)) throw InputError("piecewise profile z must be finite");
    require_positive_width(pts[i].w_um, "piecewise profile");
    if (i > 0 && !(pts[i].z_um > pts[i - 1].z_um))
      throw InputError("piecewise profile z must be strictly increasing");
  }
}

std::string_view TaperProfile::kind() const noexcept {
  return std::visit(overloaded{[](const UniformProfile&) { return std::string_view("uniform"); },
                               [](const LinearProfile&) { return std::string_view("linear"); },
                               [](const CosineProfile&) { return std::string_view("cosine"); },
                               [](const PiecewiseProfile&) { return std::string_view("piecewise"); }},
                    v_);
}

std::optional<double> TaperProfile::period_um() const noexcept {
  if (const auto* c = std::get_if<CosineProfile>(&v_)) return c->period_um;
  return std::nullopt;
}

std::optional<double> TaperProfile::length_um() const noexcept {
  if (const auto* l = std::get_if<LinearProfile>(&v_)) return l->length_um;
  return std::nullopt;
}

namespace {

void check_z(double z_um) {
  if (!(z_um >= 0.0)) throw DomainError("position z = " + fmt(z_um) + " um must be >= 0");
}

void check_linear_z(const LinearProfile& p, double z_um) {
  check_z(z_um);
  if (z_um > p.length_um)
    throw DomainError("position z = " + fmt(z_um) + " um beyond linear taper length " +
                      fmt(p.length_um) + " um");
}

// Segment index i such that points[i].z <= z < points[i+1].z, or npos when
// z is outside and clamping applies.
std::size_t segment(const PiecewiseProfile& p, double z_um) {
  const auto& pts = p.points;
  if (z_um < pts.front().z_um || z_um > pts.back().z_um) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
      warn("position z = " + fmt(z_um) + " um outside piecewise profile range [" +
           fmt(pts.front().z_um) + ", " + fmt(pts.back().z_um) +
           "] um; clamping to end width (further occurrences not reported)");
    return std::string::npos;
  }
  auto it = std::upper_bound(pts.begin(), pts.end(), z_um,
                             [](double z, const ProfilePoint& q) { return z < q.z_um; });
  auto i = static_cast<std::size_t>(it - pts.begin());
  if (i == pts.size()) --i; // z == last knot: use final segment
  return i - 1;
}

} // namespace

double width_at(const TaperProfile& profile, double z_um) {
  return std::visit(
      overloaded{
          [&](const UniformProfile& p) {
            check_z(z_um);
            return p.w0_um;
          },
          [&](const LinearProfile& p) {
            check_linear_z(p, z_um);
            return p.w0_um + p.delta_w_nm * 1e-3 / p.length_um * (z_um - 0.5 * p.length_um);
          },
          [&](const CosineProfile& p) {
            check_z(z_um);
            return p.w0_um - 0.5e-3 * p.delta_w_nm * std::cos(kTwoPi * z_um / p.period_um);
          },
          [&](const PiecewiseProfile& p) {
            check_z(z_um);
            const auto i = segment(p, z_um);
            if (i == std::string::npos)
              return z_um < p.points.front().z_um ? p.points.front().w_um : p.points.back().w_um;
            const auto& a = p.points[i];
            const auto& b = p.points[i + 1];
            const double t = (z_um - a.z_um) / (b.z_um - a.z_um);
            return a.w_um + t * (b.w_um - a.w_um);
          }},
      profile.variant());
}

double width_slope(const TaperProfile& profile, double z_um) {
  return std::visit(
      overloaded{[&](const UniformProfile&) {
                   check_z(z_um);
                   return 0.0;
                 },
                 [&](const LinearProfile& p) {
                   check_linear_z(p, z_um);
                   return p.delta_w_nm * 1e-3 / p.length_um;
                 },
                 [&](const CosineProfile& p) {
                   check_z(z_um);
                   const double k = kTwoPi / p.period_um;
                   return 0.5e-3 * p.delta_w_nm * k * std::sin(k * z_um);
                 },
                 [&](const PiecewiseProfile& p) {
                   check_z(z_um);
                   const auto i = segment(p, z_um);
                   if (i == std::string::npos) return 0.0;
                   const auto& a = p.points[i];
                   const auto& b = p.points[i + 1];
                   return (b.w_um - a.w_um) / (b.z_um - a.z_um);
                 }},
      profile.variant());
}

double dbeta_dz(const TaperProfile& profile, const DispersionModel& model, double z_um,
                double lambda3_nm) {
  const double slope = width_slope(profile, z_um);
  if (slope == 0.0) return 0.0;
  return ddelta_beta_dw(model, width_at(profile, z_um), lambda3_nm) * slope;
}

TaperProfile with_length(const TaperProfile& profile, double length_um) {
  if (const auto* l = profile.get_if<LinearProfile>())
    return TaperProfile(LinearProfile{l->w0_um, l->delta_w_nm, length_um});
  return profile;
}

PiecewiseProfile parse_piecewise(std::istream& in) {
  PiecewiseProfile out;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return std::string_view{};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  auto number = [&](std::string_view f, const char* name) {
    f = trim(f);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v))
      throw ParseError("malformed value '" + std::string(f) + "' for " + name, line_no);
    return v;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "z_um,w_um")
        throw ParseError("expected header 'z_um,w_um', got '" + std::string(line) + "'", line_no);
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw ParseError("expected 2 fields", line_no);
    ProfilePoint p{number(line.substr(0, comma), "z_um"), number(line.substr(comma + 1), "w_um")};
    if (!out.points.empty() && !(p.z_um > out.points.back().z_um))
      throw ParseError("z not strictly increasing at " + fmt(p.z_um) + " um", line_no);
    if (!(p.w_um > 0.0)) throw ParseError("width must be positive", line_no);
    out.points.push_back(p);
  }
  if (!header_seen) throw ParseError("missing header 'z_um,w_um'", line_no);
  if (out.points.size() < 2) throw ParseError("need at least 2 profile points", line_no);
  return out;
}

PiecewiseProfile load_piecewise(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile " + path.string(), 0);
  try {
    return parse_piecewise(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

} // namespace taperconv
