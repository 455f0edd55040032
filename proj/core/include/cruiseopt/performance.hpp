#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

namespace cruiseopt {

/**
 * @brief ISA troposphere constants.
 *
 * Temperature falls linearly with altitude, Theta(h) = theta0 - beta*h, and
 * pressure follows the hydrostatic power law. `kappa` only enters the Mach
 * and calibrated-airspeed monitors.
 */
struct Atmosphere {
  double p0 = 101325.0;       ///< sea-level pressure [Pa]
  double theta0 = 288.15;     ///< sea-level temperature [K]
  double beta = 0.0065;       ///< temperature lapse rate [K/m]
  double r_gas = 287.05287;   ///< specific gas constant [J/(kg K)]
  double g = 9.80665;         ///< gravitational acceleration [m/s^2]
  double kappa = 1.4;         ///< ratio of specific heats [-]

  /// Throws ValidationError if any constant is non-positive or non-finite.
  void validate() const;
};

/**
 * @brief Point-mass performance coefficients (BADA3 functional forms).
 *
 * All quantities are SI. Thrust: Tmax(h) = c_t1 (1 - h/c_t2 + h^2 c_t3).
 * Drag: parabolic polar c_d1 + c_d2 Cl^2. Specific fuel consumption:
 * Cs(v) = c_s1 (1 + v/c_s2).
 */
struct AircraftModel {
  double c_t1 = 0.0;       ///< [N]
  double c_t2 = 0.0;       ///< [m]
  double c_t3 = 0.0;       ///< [1/m^2]
  double wing_area = 0.0;  ///< [m^2]
  double c_d1 = 0.0;       ///< parasitic drag coefficient [-]
  double c_d2 = 0.0;       ///< induced drag coefficient [-]
  double c_s1 = 0.0;       ///< [kg/(s N)]
  double c_s2 = 0.0;       ///< [m/s]
  double m_min = 0.0;      ///< lower plausibility bound on mass [kg]
  double mach_min = 0.0;
  double mach_max = 0.0;
  double v_cas_min = 0.0;  ///< [m/s]
  double v_cas_max = 0.0;  ///< [m/s]

  void validate() const;
};

/// Parses an aircraft coefficient document. Keys must match the file schema
/// exactly (C_T1, C_T2, ..., v_CAS_max); unknown or missing keys are rejected.
AircraftModel aircraft_from_json(const nlohmann::json& doc);
nlohmann::json aircraft_to_json(const AircraftModel& model);
AircraftModel load_aircraft(const std::string& path);

double isa_temperature(const Atmosphere& atm, double h);
double isa_pressure(const Atmosphere& atm, double h);
double air_density(const Atmosphere& atm, double h);
double speed_of_sound(const Atmosphere& atm, double h);

/// Maximum thrust at altitude h. Requires 0 <= h <= c_t2.
double max_thrust(const AircraftModel& model, double h);
/// d Tmax / dh.
double max_thrust_dh(const AircraftModel& model, double h);

struct DragValue {
  double value;  ///< [N]
  double d_dv;   ///< [N s/m]
  double d_dm;   ///< [N/kg]
};

/// Parabolic-polar drag at a known density. Throws DomainError for v <= 0 or m <= 0.
DragValue drag_at_density(const AircraftModel& model, double rho, double g, double m, double v);
DragValue drag(const AircraftModel& model, const Atmosphere& atm, double m, double v, double h);

struct FuelFlowCoeff {
  double value;  ///< [kg/(s N)]
  double d_dv;   ///< [kg/(m N)]
};

FuelFlowCoeff fuel_flow_coeff(const AircraftModel& model, double v);

/// Envelope monitor output. Margins are positive when the bound holds.
struct EnvelopeReport {
  double mach = 0.0;
  double cas = 0.0;  ///< calibrated airspeed [m/s]
  bool mach_min_ok = true;
  bool mach_max_ok = true;
  bool cas_min_ok = true;
  bool cas_max_ok = true;
  double mach_min_margin = 0.0;
  double mach_max_margin = 0.0;
  double cas_min_margin = 0.0;
  double cas_max_margin = 0.0;

  bool mach_ok() const { return mach_min_ok && mach_max_ok; }
  bool cas_ok() const { return cas_min_ok && cas_max_ok; }
  bool ok() const { return mach_ok() && cas_ok(); }
};

/// Compressible ISA conversion from true to calibrated airspeed.
double calibrated_airspeed(const Atmosphere& atm, double v, double h);

/// Reports (never enforces) the Mach and CAS bounds at true airspeed v.
EnvelopeReport check_envelope(const AircraftModel& model, const Atmosphere& atm, double v,
                              double h);

}  // namespace cruiseopt
