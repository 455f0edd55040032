#include "cruiseopt/io.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "cruiseopt/errors.hpp"

namespace cruiseopt {

namespace {

using nlohmann::json;

double number(const json& doc, const std::string& key, const std::string& prefix = "") {
  auto it = doc.find(key);
  if (it == doc.end()) throw ValidationError(prefix + key, "missing required field");
  if (!it->is_number()) throw ValidationError(prefix + key, "must be a number");
  return it->get<double>();
}

double number_or(const json& doc, const std::string& key, double fallback,
                 const std::string& prefix = "") {
  return doc.contains(key) ? number(doc, key, prefix) : fallback;
}

void reject_unknown(const json& doc, const std::set<std::string>& known,
                    const std::string& prefix = "") {
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ValidationError(prefix + key, "unknown key");
  }
}

}  // namespace

WindField wind_from_json(const json& doc, double x_scale, double y_scale) {
  if (!doc.is_object()) throw ValidationError("wind", "must be an object");
  auto type = doc.find("type");
  if (type == doc.end() || !type->is_string()) {
    throw ValidationError("wind.type", "must be \"polynomial\" or \"constant\"");
  }
  if (*type == "constant") {
    reject_unknown(doc, {"type", "Wx", "Wy"}, "wind.");
    return ConstantWind{number(doc, "Wx", "wind."), number(doc, "Wy", "wind.")};
  }
  if (*type == "polynomial") {
    reject_unknown(doc, {"type", "a0", "a1", "a2", "a3", "a4", "a5", "b0", "b1", "wxb", "wyb"},
                   "wind.");
    PolynomialWind p;
    for (int i = 0; i < 6; ++i) p.a[i] = number(doc, "a" + std::to_string(i), "wind.");
    for (int i = 0; i < 2; ++i) p.b[i] = number(doc, "b" + std::to_string(i), "wind.");
    p.wxb = number(doc, "wxb", "wind.");
    p.wyb = number(doc, "wyb", "wind.");
    p.x_scale = x_scale;
    p.y_scale = y_scale;
    return p;
  }
  throw ValidationError("wind.type", "must be \"polynomial\" or \"constant\"");
}

json wind_to_json(const WindField& wind) {
  json doc;
  if (const auto* c = std::get_if<ConstantWind>(&wind)) {
    doc["type"] = "constant";
    doc["Wx"] = c->wx;
    doc["Wy"] = c->wy;
  } else {
    const auto& p = std::get<PolynomialWind>(wind);
    doc["type"] = "polynomial";
    for (int i = 0; i < 6; ++i) doc["a" + std::to_string(i)] = p.a[i];
    for (int i = 0; i < 2; ++i) doc["b" + std::to_string(i)] = p.b[i];
    doc["wxb"] = p.wxb;
    doc["wyb"] = p.wyb;
  }
  return doc;
}

Atmosphere atmosphere_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("atmosphere", "must be an object");
  reject_unknown(doc, {"P0_Pa", "Theta0_K", "beta_K_per_m", "R_J_per_kgK", "g_mps2", "kappa"},
                 "atmosphere.");
  Atmosphere atm;
  atm.p0 = number_or(doc, "P0_Pa", atm.p0, "atmosphere.");
  atm.theta0 = number_or(doc, "Theta0_K", atm.theta0, "atmosphere.");
  atm.beta = number_or(doc, "beta_K_per_m", atm.beta, "atmosphere.");
  atm.r_gas = number_or(doc, "R_J_per_kgK", atm.r_gas, "atmosphere.");
  atm.g = number_or(doc, "g_mps2", atm.g, "atmosphere.");
  atm.kappa = number_or(doc, "kappa", atm.kappa, "atmosphere.");
  atm.validate();
  return atm;
}

json atmosphere_to_json(const Atmosphere& atm) {
  return json{{"P0_Pa", atm.p0},          {"Theta0_K", atm.theta0},
              {"beta_K_per_m", atm.beta}, {"R_J_per_kgK", atm.r_gas},
              {"g_mps2", atm.g},          {"kappa", atm.kappa}};
}

Scenario scenario_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ValidationError("", "scenario must be a JSON object");
  reject_unknown(doc, {"aircraft_file", "aircraft", "x0_m", "y0_m", "xf_m", "yf_m", "v0_mps",
                       "vf_mps", "m0_kg", "h_m", "alpha", "pi_min", "pi_max", "wind",
                       "atmosphere"});
  Scenario s;
  auto af = doc.find("aircraft_file");
  auto inline_aircraft = doc.find("aircraft");
  if (af != doc.end() && !af->is_string()) {
    throw ValidationError("aircraft_file", "must be a string");
  }
  if (af != doc.end()) s.aircraft_file = af->get<std::string>();
  if (inline_aircraft != doc.end()) {
    if (!inline_aircraft->is_object()) throw ValidationError("aircraft", "must be an object");
    s.aircraft = aircraft_from_json(*inline_aircraft);
  } else if (af != doc.end()) {
    std::filesystem::path aircraft_path(s.aircraft_file);
    if (aircraft_path.is_relative()) aircraft_path = base_dir / aircraft_path;
    s.aircraft = load_aircraft(aircraft_path.string());
  } else {
    throw ValidationError("aircraft_file", "missing (or give the coefficients under \"aircraft\")");
  }

  s.x0 = number(doc, "x0_m");
  s.y0 = number(doc, "y0_m");
  s.xf = number(doc, "xf_m");
  s.yf = number(doc, "yf_m");
  s.v0 = number(doc, "v0_mps");
  s.vf = number(doc, "vf_mps");
  s.m0 = number(doc, "m0_kg");
  s.h = number(doc, "h_m");
  s.alpha = number(doc, "alpha");
  s.pi_min = number(doc, "pi_min");
  s.pi_max = number(doc, "pi_max");
  auto wind = doc.find("wind");
  if (wind == doc.end()) throw ValidationError("wind", "missing required field");
  s.wind = wind_from_json(*wind, s.xf, s.yf);
  if (auto atm = doc.find("atmosphere"); atm != doc.end()) {
    s.atmosphere = atmosphere_from_json(*atm);
  }
  s.warnings = coefficient_warnings(s.wind);
  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s, bool embed_aircraft) {
  json doc;
  doc["aircraft_file"] = s.aircraft_file;
  if (embed_aircraft) doc["aircraft"] = aircraft_to_json(s.aircraft);
  doc["x0_m"] = s.x0;
  doc["y0_m"] = s.y0;
  doc["xf_m"] = s.xf;
  doc["yf_m"] = s.yf;
  doc["v0_mps"] = s.v0;
  doc["vf_mps"] = s.vf;
  doc["m0_kg"] = s.m0;
  doc["h_m"] = s.h;
  doc["alpha"] = s.alpha;
  doc["pi_min"] = s.pi_min;
  doc["pi_max"] = s.pi_max;
  doc["wind"] = wind_to_json(s.wind);
  doc["atmosphere"] = atmosphere_to_json(s.atmosphere);
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("", "cannot open scenario file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError("", path.string() + ": " + e.what());
  }
  return scenario_from_json(doc, path.parent_path());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace cruiseopt
