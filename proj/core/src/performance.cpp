#include "cruiseopt/performance.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "cruiseopt/errors.hpp"

namespace cruiseopt {

namespace {

void require_positive(double value, const char* field) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw ValidationError(field, "must be finite and > 0");
  }
}

void require_finite(double value, const char* field) {
  if (!std::isfinite(value)) throw ValidationError(field, "must be finite");
}

void check_altitude(const Atmosphere& atm, double h) {
  if (!std::isfinite(h) || atm.beta * h >= atm.theta0) {
    throw DomainError("altitude " + std::to_string(h) + " m outside the ISA troposphere model");
  }
}

// (key, member) table shared by the parser and the serializer.
struct Field {
  const char* key;
  double AircraftModel::*member;
};

constexpr Field kAircraftFields[] = {
    {"C_T1", &AircraftModel::c_t1},         {"C_T2", &AircraftModel::c_t2},
    {"C_T3", &AircraftModel::c_t3},         {"s", &AircraftModel::wing_area},
    {"C_D1", &AircraftModel::c_d1},         {"C_D2", &AircraftModel::c_d2},
    {"C_s1", &AircraftModel::c_s1},         {"C_s2", &AircraftModel::c_s2},
    {"m_min", &AircraftModel::m_min},       {"M_min", &AircraftModel::mach_min},
    {"M_max", &AircraftModel::mach_max},    {"v_CAS_min", &AircraftModel::v_cas_min},
    {"v_CAS_max", &AircraftModel::v_cas_max},
};

}  // namespace

void Atmosphere::validate() const {
  require_positive(p0, "P0");
  require_positive(theta0, "Theta0");
  require_positive(beta, "beta");
  require_positive(r_gas, "R");
  require_positive(g, "g");
  require_positive(kappa, "kappa");
}

void AircraftModel::validate() const {
  require_positive(c_t1, "C_T1");
  require_positive(c_t2, "C_T2");
  require_finite(c_t3, "C_T3");
  require_positive(wing_area, "s");
  require_positive(c_d1, "C_D1");
  require_positive(c_d2, "C_D2");
  require_positive(c_s1, "C_s1");
  require_positive(c_s2, "C_s2");
  require_finite(m_min, "m_min");
  require_finite(mach_min, "M_min");
  require_finite(mach_max, "M_max");
  require_finite(v_cas_min, "v_CAS_min");
  require_finite(v_cas_max, "v_CAS_max");
  if (!(mach_min < mach_max)) throw ValidationError("M_max", "must exceed M_min");
  if (!(v_cas_min < v_cas_max)) throw ValidationError("v_CAS_max", "must exceed v_CAS_min");
}

AircraftModel aircraft_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("", "aircraft document must be a JSON object");
  std::set<std::string> known;
  AircraftModel model;
  for (const auto& f : kAircraftFields) {
    known.insert(f.key);
    auto it = doc.find(f.key);
    if (it == doc.end()) throw ValidationError(f.key, "missing required field");
    if (!it->is_number()) throw ValidationError(f.key, "must be a number");
    model.*(f.member) = it->get<double>();
  }
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ValidationError(key, "unknown key in aircraft file");
  }
  model.validate();
  return model;
}

nlohmann::json aircraft_to_json(const AircraftModel& model) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& f : kAircraftFields) doc[f.key] = model.*(f.member);
  return doc;
}

AircraftModel load_aircraft(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("", "cannot open aircraft file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("", path + ": " + e.what());
  }
  return aircraft_from_json(doc);
}

double isa_temperature(const Atmosphere& atm, double h) {
  check_altitude(atm, h);
  return atm.theta0 - atm.beta * h;
}

double isa_pressure(const Atmosphere& atm, double h) {
  const double theta = isa_temperature(atm, h);
  return atm.p0 * std::pow(theta / atm.theta0, atm.g / (atm.beta * atm.r_gas));
}

double air_density(const Atmosphere& atm, double h) {
  return isa_pressure(atm, h) / (atm.r_gas * isa_temperature(atm, h));
}

double speed_of_sound(const Atmosphere& atm, double h) {
  return std::sqrt(atm.kappa * atm.r_gas * isa_temperature(atm, h));
}

double max_thrust(const AircraftModel& model, double h) {
  if (!std::isfinite(h) || h < 0.0 || h > model.c_t2) {
    throw DomainError("max_thrust: altitude must satisfy 0 <= h <= C_T2");
  }
  const double t = model.c_t1 * (1.0 - h / model.c_t2 + h * h * model.c_t3);
  if (!std::isfinite(t) || t < 0.0) {
    throw ModelError("max_thrust: coefficients give negative or non-finite thrust");
  }
  return t;
}

double max_thrust_dh(const AircraftModel& model, double h) {
  return model.c_t1 * (-1.0 / model.c_t2 + 2.0 * h * model.c_t3);
}

DragValue drag_at_density(const AircraftModel& model, double rho, double g, double m, double v) {
  if (!(v > 0.0)) throw DomainError("drag: airspeed must be > 0");
  if (!(m > 0.0)) throw DomainError("drag: mass must be > 0");
  // D = k0 v^2 + k2 m^2 / v^2 once Cl = 2 m g / (rho s v^2) is substituted.
  const double k0 = 0.5 * rho * model.wing_area * model.c_d1;
  const double k2 = 2.0 * model.c_d2 * g * g / (rho * model.wing_area);
  const double v2 = v * v;
  const double induced = k2 * m * m / v2;
  DragValue d;
  d.value = k0 * v2 + induced;
  d.d_dv = 2.0 * k0 * v - 2.0 * induced / v;
  d.d_dm = 2.0 * k2 * m / v2;
  if (!std::isfinite(d.value)) throw ModelError("drag: non-finite value");
  return d;
}

DragValue drag(const AircraftModel& model, const Atmosphere& atm, double m, double v, double h) {
  return drag_at_density(model, air_density(atm, h), atm.g, m, v);
}

FuelFlowCoeff fuel_flow_coeff(const AircraftModel& model, double v) {
  if (!std::isfinite(v)) throw DomainError("fuel_flow_coeff: non-finite airspeed");
  return {model.c_s1 * (1.0 + v / model.c_s2), model.c_s1 / model.c_s2};
}

double calibrated_airspeed(const Atmosphere& atm, double v, double h) {
  const double k = atm.kappa;
  const double e = (k - 1.0) / k;
  const double p = isa_pressure(atm, h);
  const double mach = v / speed_of_sound(atm, h);
  // Impact pressure from isentropic flow, then referred back to sea level.
  const double qc = p * (std::pow(1.0 + 0.5 * (k - 1.0) * mach * mach, 1.0 / e) - 1.0);
  const double rho0 = atm.p0 / (atm.r_gas * atm.theta0);
  return std::sqrt(2.0 / e * atm.p0 / rho0 * (std::pow(qc / atm.p0 + 1.0, e) - 1.0));
}

EnvelopeReport check_envelope(const AircraftModel& model, const Atmosphere& atm, double v,
                              double h) {
  EnvelopeReport r;
  r.mach = v / speed_of_sound(atm, h);
  r.cas = calibrated_airspeed(atm, v, h);
  r.mach_min_margin = r.mach - model.mach_min;
  r.mach_max_margin = model.mach_max - r.mach;
  r.cas_min_margin = r.cas - model.v_cas_min;
  r.cas_max_margin = model.v_cas_max - r.cas;
  r.mach_min_ok = r.mach_min_margin >= 0.0;
  r.mach_max_ok = r.mach_max_margin >= 0.0;
  r.cas_min_ok = r.cas_min_margin >= 0.0;
  r.cas_max_ok = r.cas_max_margin >= 0.0;
  return r;
}

}  // namespace cruiseopt
