#include "taperconv/config.hpp"

#include "taperconv/errors.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

namespace taperconv {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kRootPath = "config";

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Read access to one JSON object that remembers which keys were used, so
// leftovers can be reported as unknown.
class Section {
public:
  Section(const json* j, std::string path) : path_(std::move(path)) {
    if (j != nullptr && !j->is_object()) throw ConfigError(where(), "expected an object");
    j_ = j;
  }

  std::string at(const std::string& key) const { return join(path_, key); }
  std::string where() const { return path_.empty() ? kRootPath : path_; }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    if (j_ == nullptr) return nullptr;
    const auto it = j_->find(key);
    return it == j_->end() ? nullptr : &*it;
  }

  std::optional<double> number(const std::string& key) {
    const json* v = raw(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) throw ConfigError(at(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(at(key), "expected a finite number");
    return x;
  }

  std::optional<std::string> string(const std::string& key) {
    const json* v = raw(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) throw ConfigError(at(key), "expected a string");
    return v->get<std::string>();
  }

  std::optional<std::size_t> count(const std::string& key) {
    const json* v = raw(key);
    if (v == nullptr) return std::nullopt;
    if (v->is_number_unsigned()) return v->get<std::size_t>();
    if (v->is_number_integer()) throw ConfigError(at(key), "must be >= 0");
    throw ConfigError(at(key), "expected an integer");
  }

  void finish() const {
    if (j_ == nullptr) return;
    for (const auto& [key, value] : j_->items())
      if (!seen_.count(key)) throw ConfigError(at(key), "unknown key");
  }

private:
  const json* j_ = nullptr;
  std::string path_;
  std::set<std::string> seen_;
};

double positive(const Section& s, const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError(s.at(key), "must be > 0");
  return v;
}

double non_negative(const Section& s, const std::string& key, double v) {
  if (!(v >= 0.0)) throw ConfigError(s.at(key), "must be >= 0");
  return v;
}

std::string resolve_path(const std::string& p, const std::filesystem::path& base_dir) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base_dir / path;
  return std::filesystem::absolute(path).lexically_normal().string();
}

const json* section_of(const json& doc, const char* name) {
  const auto it = doc.find(name);
  return it == doc.end() ? nullptr : &*it;
}

DispersionConfig parse_dispersion(const json* j, const std::filesystem::path& base_dir) {
  Section s(j, "dispersion");
  DispersionConfig c;
  c.type = s.string("type").value_or("synthetic");
  if (c.type != "synthetic" && c.type != "tabulated")
    throw ConfigError(s.at("type"), "expected 'synthetic' or 'tabulated', got '" + c.type + "'");

  c.lambda1 = positive(s, "lambda1", s.number("lambda1").value_or(c.lambda1));
  c.lambda2 = positive(s, "lambda2", s.number("lambda2").value_or(c.lambda2));
  const auto derived = DesignWavelengths::from_signal_pump(c.lambda1, c.lambda2);
  c.lambda3_center = positive(s, "lambda3_center",
                              s.number("lambda3_center").value_or(derived.lambda3_center_nm));
  const DesignWavelengths design{c.lambda1, c.lambda2, c.lambda3_center};
  try {
    design.validate();
  } catch (const InputError& e) {
    throw ConfigError(s.at("lambda3_center"), e.what());
  }

  double slope_at_ref = 0.0;
  if (c.type == "synthetic") {
    c.w0 = positive(s, "w0", s.number("w0").value_or(defaults::kW0Um));
    c.kappa_w = positive(s, "kappa_w", s.number("kappa_w").value_or(defaults::kKappaW));
    c.dbeta_dlambda = positive(
        s, "dbeta_dlambda",
        s.number("dbeta_dlambda")
            .value_or(dbeta_dlambda_from_contrast(defaults::kIndexContrast, c.lambda3_center)));
    slope_at_ref = c.dbeta_dlambda;
  } else {
    const auto p = s.string("path");
    if (!p) throw ConfigError(s.at("path"), "required for tabulated dispersion");
    c.path = resolve_path(*p, base_dir);
    try {
      const auto table = load_tabulated(c.path, design);
      const DispersionModel probe(table, CouplingSpec{0.0, 1.0, 0.0});
      const double w_ref = probe.reference_width_um();
      if (!std::isnan(w_ref)) slope_at_ref = dbeta_dlambda_from_indices(table, w_ref);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(s.at("path"), e.what());
    }
  }

  if (const auto g = s.number("g_ref")) {
    c.g_ref = non_negative(s, "g_ref", *g);
  } else {
    if (!(slope_at_ref > 0.0))
      throw ConfigError(s.at("g_ref"),
                        "required: the table gives no positive dbeta_dlambda at a phase-matched "
                        "width to calibrate against");
    c.g_ref = calibrated_g_ref(slope_at_ref, defaults::kCalibrationAreaNm,
                               defaults::kCalibrationLengthUm);
  }
  c.p_ref = positive(s, "p_ref", s.number("p_ref").value_or(defaults::kPumpReferenceW));
  c.g_slope = s.number("g_slope").value_or(0.0);
  s.finish();
  return c;
}

ProfileConfig parse_profile(const json* j, const DispersionModel& model,
                            const std::filesystem::path& base_dir) {
  Section s(j, "profile");
  ProfileConfig c;
  c.type = s.string("type").value_or("uniform");
  const bool centered = c.type == "uniform" || c.type == "linear" || c.type == "cosine";
  if (!centered && c.type != "piecewise")
    throw ConfigError(s.at("type"), "expected 'uniform', 'linear', 'cosine' or 'piecewise', got '" +
                                        c.type + "'");

  if (centered) {
    if (const auto w = s.number("w0")) {
      c.w0 = positive(s, "w0", *w);
    } else {
      c.w0 = model.reference_width_um();
      if (std::isnan(c.w0))
        throw ConfigError(s.at("w0"), "required: the dispersion model has no phase-matched width");
    }
  }
  if (c.type == "linear" || c.type == "cosine") c.delta_w = s.number("delta_w").value_or(0.0);
  if (c.type == "cosine") {
    const auto t = s.number("period");
    if (!t) throw ConfigError(s.at("period"), "required for cosine profiles");
    c.period = positive(s, "period", *t);
  }
  if (c.type == "piecewise") {
    const json* pts = s.raw("points");
    const auto p = s.string("path");
    if ((pts == nullptr) == !p)
      throw ConfigError(s.where(), "piecewise profiles need exactly one of 'points' or 'path'");
    if (p) {
      c.path = resolve_path(*p, base_dir);
      try {
        c.points = load_piecewise(c.path).points;
      } catch (const std::exception& e) {
        throw ConfigError(s.at("path"), e.what());
      }
    } else {
      if (!pts->is_array()) throw ConfigError(s.at("points"), "expected an array of [z, w] pairs");
      for (std::size_t i = 0; i < pts->size(); ++i) {
        const auto& e = (*pts)[i];
        const std::string at = s.at("points") + "[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw ConfigError(at, "expected a [z, w] pair of numbers");
        c.points.push_back({e[0].get<double>(), e[1].get<double>()});
      }
    }
  }
  s.finish();
  return c;
}

SimulationConfig parse_simulation(const json* j, const DesignWavelengths& design) {
  Section s(j, "simulation");
  SimulationConfig c;
  c.length = positive(s, "length", s.number("length").value_or(c.length));
  c.pump_power = non_negative(s, "pump_power", s.number("pump_power").value_or(c.pump_power));
  c.lambda3 = positive(s, "lambda3", s.number("lambda3").value_or(design.lambda3_center_nm));
  if (const json* v = s.raw("step_count"); v != nullptr && !(v->is_string() && *v == "auto")) {
    if (!v->is_number_unsigned())
      throw ConfigError(s.at("step_count"), "expected \"auto\" or a positive integer");
    c.step_count = v->get<std::size_t>();
    if (*c.step_count < kMinExplicitSteps)
      throw ConfigError(s.at("step_count"), "must be >= " + std::to_string(kMinExplicitSteps));
    if (*c.step_count > kMaxSteps)
      throw ConfigError(s.at("step_count"), "must be <= " + std::to_string(kMaxSteps));
  }
  c.loss_alpha1 = non_negative(s, "loss_alpha1", s.number("loss_alpha1").value_or(0.0));
  c.loss_alpha3 = non_negative(s, "loss_alpha3", s.number("loss_alpha3").value_or(0.0));
  s.finish();
  return c;
}

SpectrumConfig parse_spectrum(const json* j) {
  Section s(j, "spectrum");
  SpectrumConfig c;
  c.lambda_min = s.number("lambda_min");
  c.lambda_max = s.number("lambda_max");
  if (c.lambda_min.has_value() != c.lambda_max.has_value())
    throw ConfigError(s.at(c.lambda_min ? "lambda_max" : "lambda_min"),
                      "lambda_min and lambda_max must be given together");
  if (c.lambda_min) {
    positive(s, "lambda_min", *c.lambda_min);
    if (!(*c.lambda_max > *c.lambda_min))
      throw ConfigError(s.at("lambda_max"), "must exceed lambda_min");
  }
  c.points = s.count("points").value_or(c.points);
  if (c.points < kMinSpectrumPoints)
    throw ConfigError(s.at("points"), "must be >= " + std::to_string(kMinSpectrumPoints));
  s.finish();
  return c;
}

std::optional<SweepConfig> parse_sweep(const json* j) {
  if (j == nullptr) return std::nullopt;
  Section s(j, "sweep");
  SweepConfig c;
  const auto p = s.string("parameter");
  if (!p) throw ConfigError(s.at("parameter"), "required");
  if (*p != param::kLength && *p != param::kDeltaW && *p != param::kPump && *p != param::kPeriod)
    throw ConfigError(s.at("parameter"),
                      "expected 'length', 'delta_w', 'pump_power' or 'period', got '" + *p + "'");
  c.parameter = *p;

  const json* v = s.raw("values");
  if (v == nullptr) throw ConfigError(s.at("values"), "required");
  if (!v->is_array() || v->empty())
    throw ConfigError(s.at("values"), "expected a non-empty array of numbers");
  const bool zero_ok = c.parameter == param::kPump || c.parameter == param::kDeltaW;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const std::string at = s.at("values") + "[" + std::to_string(i) + "]";
    if (!(*v)[i].is_number()) throw ConfigError(at, "expected a number");
    const double x = (*v)[i].get<double>();
    if (!std::isfinite(x) || x < 0.0 || (!zero_ok && x == 0.0))
      throw ConfigError(at, zero_ok ? "must be >= 0" : "must be > 0");
    c.values.push_back(x);
  }
  if (const auto o = s.string("observable")) {
    try {
      c.observable = observable_from_string(*o);
    } catch (const InputError& e) {
      throw ConfigError(s.at("observable"), e.what());
    }
  }
  s.finish();
  return c;
}

} // namespace

DispersionModel RunConfig::model() const {
  const DesignWavelengths design{dispersion.lambda1, dispersion.lambda2, dispersion.lambda3_center};
  const CouplingSpec coupling{dispersion.g_ref, dispersion.p_ref, dispersion.g_slope};
  if (dispersion.type == "tabulated")
    return {load_tabulated(dispersion.path, design), coupling};
  return {SyntheticDispersion{dispersion.w0, dispersion.kappa_w, dispersion.dbeta_dlambda, design},
          coupling};
}

TaperProfile RunConfig::taper() const {
  if (profile.type == "linear")
    return LinearProfile{profile.w0, profile.delta_w, simulation.length};
  if (profile.type == "cosine") return CosineProfile{profile.w0, profile.delta_w, profile.period};
  if (profile.type == "piecewise") return PiecewiseProfile{profile.points};
  return UniformProfile{profile.w0};
}

PropagationSettings RunConfig::settings() const {
  return {simulation.step_count, simulation.loss_alpha1, simulation.loss_alpha3};
}

Scenario RunConfig::scenario() const {
  return {model(), taper(), simulation.length, simulation.pump_power, settings()};
}

ordered_json RunConfig::to_json() const {
  ordered_json d;
  d["type"] = dispersion.type;
  if (dispersion.type == "tabulated") d["path"] = dispersion.path;
  d["lambda1"] = dispersion.lambda1;
  d["lambda2"] = dispersion.lambda2;
  d["lambda3_center"] = dispersion.lambda3_center;
  if (dispersion.type == "synthetic") {
    d["w0"] = dispersion.w0;
    d["kappa_w"] = dispersion.kappa_w;
    d["dbeta_dlambda"] = dispersion.dbeta_dlambda;
  }
  d["g_ref"] = dispersion.g_ref;
  d["p_ref"] = dispersion.p_ref;
  d["g_slope"] = dispersion.g_slope;

  ordered_json p;
  p["type"] = profile.type;
  if (profile.type == "piecewise") {
    if (!profile.path.empty()) {
      p["path"] = profile.path;
    } else {
      auto pts = ordered_json::array();
      for (const auto& pt : profile.points) pts.push_back({pt.z_um, pt.w_um});
      p["points"] = pts;
    }
  } else {
    p["w0"] = profile.w0;
  }
  if (profile.type == "linear" || profile.type == "cosine") p["delta_w"] = profile.delta_w;
  if (profile.type == "cosine") p["period"] = profile.period;

  ordered_json sim;
  sim["length"] = simulation.length;
  sim["pump_power"] = simulation.pump_power;
  sim["lambda3"] = simulation.lambda3;
  if (simulation.step_count)
    sim["step_count"] = *simulation.step_count;
  else
    sim["step_count"] = "auto";
  sim["loss_alpha1"] = simulation.loss_alpha1;
  sim["loss_alpha3"] = simulation.loss_alpha3;

  ordered_json spec = ordered_json::object();
  if (spectrum.lambda_min) {
    spec["lambda_min"] = *spectrum.lambda_min;
    spec["lambda_max"] = *spectrum.lambda_max;
  }
  spec["points"] = spectrum.points;

  ordered_json out;
  out["dispersion"] = d;
  out["profile"] = p;
  out["simulation"] = sim;
  out["spectrum"] = spec;
  if (sweep) {
    ordered_json sw;
    sw["parameter"] = sweep->parameter;
    sw["values"] = sweep->values;
    sw["observable"] = std::string(to_string(sweep->observable));
    out["sweep"] = sw;
  }
  return out;
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError(kRootPath, "expected a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "dispersion" && key != "profile" && key != "simulation" && key != "spectrum" &&
        key != "sweep")
      throw ConfigError(key, "unknown key");

  RunConfig c;
  c.dispersion = parse_dispersion(section_of(doc, "dispersion"), base_dir);
  const auto model = [&] {
    try {
      return c.model();
    } catch (const std::exception& e) {
      throw ConfigError("dispersion", e.what());
    }
  }();
  c.profile = parse_profile(section_of(doc, "profile"), model, base_dir);
  c.simulation = parse_simulation(section_of(doc, "simulation"), model.design());
  c.spectrum = parse_spectrum(section_of(doc, "spectrum"));
  c.sweep = parse_sweep(section_of(doc, "sweep"));

  try {
    (void)c.taper();
  } catch (const std::exception& e) {
    throw ConfigError("profile", e.what());
  }
  return c;
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(kRootPath, std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc, base_dir);
}

RunConfig load_config(const std::string& path) {
  if (path == "-") {
    const std::string text{std::istreambuf_iterator<char>(std::cin), {}};
    return parse_config_text(text);
  }
  std::ifstream in(path);
  if (!in) throw ConfigError(kRootPath, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::absolute(std::filesystem::path(path)).parent_path();
  return parse_config_text(ss.str(), dir);
}

} // namespace taperconv
