#include "taperconv/io.hpp"

#include "taperconv/version.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace taperconv {

using nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", kOutputDigits, v);
  return buf;
}

double round_output(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void write_csv_preamble(std::ostream& out, const RunConfig& config) {
  out << "# taperconv " << version() << '\n';
  out << "# config: " << config.to_json().dump() << '\n';
}

ordered_json output_header(const RunConfig& config) {
  ordered_json j;
  j["version"] = std::string(version());
  j["config"] = config.to_json();
  return j;
}

ordered_json grid_json(const WavelengthGrid& grid) {
  ordered_json j;
  j["lambda_min_nm"] = round_output(grid.min_nm);
  j["lambda_max_nm"] = round_output(grid.max_nm);
  j["points"] = grid.points;
  return j;
}

ordered_json profile_json(const TaperProfile& profile) {
  ordered_json j;
  j["type"] = std::string(profile.kind());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PiecewiseProfile>) {
          auto pts = ordered_json::array();
          for (const auto& pt : p.points) pts.push_back({round_output(pt.z_um), round_output(pt.w_um)});
          j["points"] = pts;
        } else {
          j["w0_um"] = round_output(p.w0_um);
          if constexpr (!std::is_same_v<T, UniformProfile>) j["delta_w_nm"] = round_output(p.delta_w_nm);
          if constexpr (std::is_same_v<T, CosineProfile>) j["period_um"] = round_output(p.period_um);
        }
      },
      profile.variant());
  return j;
}

void write_spectrum_csv_rows(std::ostream& out, const Spectrum& s) {
  out << "lambda_nm,eta\n";
  for (std::size_t i = 0; i < s.etas.size(); ++i)
    out << format_number(s.lambdas_nm[i]) << ',' << format_number(s.etas[i]) << '\n';
}

std::string record_csv_header() {
  return "parameter,value,observable,observed,length_um,pump_power_w,lambda3_nm,profile,w0_um,"
         "delta_w_nm,period_um,step_count,loss_alpha1_per_m,loss_alpha3_per_m,grid_min_nm,"
         "grid_max_nm,grid_points,warnings";
}

namespace {

struct ProfileColumns {
  std::string w0;
  std::string delta_w;
  std::string period;
};

ProfileColumns profile_columns(const TaperProfile& profile) {
  ProfileColumns c;
  if (const auto* u = profile.get_if<UniformProfile>()) c.w0 = format_number(u->w0_um);
  if (const auto* l = profile.get_if<LinearProfile>()) {
    c.w0 = format_number(l->w0_um);
    c.delta_w = format_number(l->delta_w_nm);
  }
  if (const auto* k = profile.get_if<CosineProfile>()) {
    c.w0 = format_number(k->w0_um);
    c.delta_w = format_number(k->delta_w_nm);
    c.period = format_number(k->period_um);
  }
  return c;
}

std::string join_warnings(const std::vector<std::string>& w) {
  std::string s;
  for (const auto& x : w) s += (s.empty() ? "" : "; ") + x;
  return s;
}

} // namespace

void write_record_csv(std::ostream& out, const SweepRecord& r) {
  const auto& s = r.scenario;
  const auto pc = profile_columns(s.profile);
  out << csv_field(r.parameter) << ',' << format_number(r.value) << ','
      << to_string(r.observable) << ',' << format_number(r.observed) << ','
      << format_number(s.length_um) << ',' << format_number(s.pump_power_w) << ','
      << format_number(r.lambda3_nm) << ',' << s.profile.kind() << ',' << pc.w0 << ','
      << pc.delta_w << ',' << pc.period << ','
      << (s.settings.step_count ? std::to_string(*s.settings.step_count) : "auto") << ','
      << format_number(s.settings.loss_alpha1_per_m) << ','
      << format_number(s.settings.loss_alpha3_per_m) << ',';
  if (r.grid)
    out << format_number(r.grid->min_nm) << ',' << format_number(r.grid->max_nm) << ','
        << r.grid->points;
  else
    out << ",,";
  out << ',' << csv_field(join_warnings(r.warnings)) << '\n';
}

ordered_json record_json(const SweepRecord& r) {
  const auto& s = r.scenario;
  ordered_json snap;
  snap["length_um"] = round_output(s.length_um);
  snap["pump_power_w"] = round_output(s.pump_power_w);
  snap["lambda3_nm"] = round_output(r.lambda3_nm);
  snap["profile"] = profile_json(s.profile);
  if (s.settings.step_count)
    snap["step_count"] = *s.settings.step_count;
  else
    snap["step_count"] = "auto";
  snap["loss_alpha1_per_m"] = round_output(s.settings.loss_alpha1_per_m);
  snap["loss_alpha3_per_m"] = round_output(s.settings.loss_alpha3_per_m);
  snap["grid"] = r.grid ? grid_json(*r.grid) : ordered_json(nullptr);

  ordered_json j;
  j["parameter"] = r.parameter;
  j["value"] = round_output(r.value);
  j["observable"] = std::string(to_string(r.observable));
  j["observed"] = round_output(r.observed);
  j["snapshot"] = snap;
  j["warnings"] = r.warnings;
  return j;
}

} // namespace taperconv
