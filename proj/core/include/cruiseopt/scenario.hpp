#pragma once

#include <string>
#include <vector>

#include "cruiseopt/dynamics.hpp"

namespace cruiseopt {

/// One cruise problem: boundary conditions, cost weight, throttle bounds,
/// wind and the aircraft/atmosphere models it refers to. t0 is fixed at 0.
struct Scenario {
  double x0 = 0.0;  ///< [m]
  double y0 = 0.0;  ///< [m]
  double xf = 0.0;  ///< [m]
  double yf = 0.0;  ///< [m]
  double v0 = 0.0;  ///< [m/s]
  double vf = 0.0;  ///< [m/s]
  double m0 = 0.0;  ///< [kg]
  double h = 0.0;   ///< cruise altitude [m]
  double alpha = 0.0;
  double pi_min = 0.0;
  double pi_max = 1.0;
  WindField wind = ConstantWind{};
  std::string aircraft_file;  ///< as written in the scenario document
  AircraftModel aircraft;
  Atmosphere atmosphere;
  std::vector<std::string> warnings;

  /// Throws ValidationError naming the first offending field.
  void validate() const;

  StateVector initial_state() const { return {x0, y0, v0, m0}; }
  double great_circle_distance() const;
};

FlightModel make_flight_model(const Scenario& scenario);

}  // namespace cruiseopt
