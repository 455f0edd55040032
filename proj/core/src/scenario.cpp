#include "cruiseopt/scenario.hpp"

#include <cmath>

#include "cruiseopt/errors.hpp"

namespace cruiseopt {

namespace {

void finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

}  // namespace

void Scenario::validate() const {
  finite(x0, "x0_m");
  finite(y0, "y0_m");
  finite(xf, "xf_m");
  finite(yf, "yf_m");
  finite(m0, "m0_kg");
  finite(h, "h_m");
  if (!(std::isfinite(v0) && v0 > 0.0)) throw ValidationError("v0_mps", "must be > 0");
  if (!(std::isfinite(vf) && vf > 0.0)) throw ValidationError("vf_mps", "must be > 0");
  if (!(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha", "must lie in [0, 1]");
  }
  finite(pi_min, "pi_min");
  finite(pi_max, "pi_max");
  if (!(pi_min < pi_max)) throw ValidationError("pi_max", "must exceed pi_min");
  if (pi_min < 0.0) throw ValidationError("pi_min", "must be >= 0 (mass cannot increase)");
  if (!(m0 > aircraft.m_min)) throw ValidationError("m0_kg", "must exceed the aircraft m_min");
  aircraft.validate();
  atmosphere.validate();
  cruiseopt::validate(wind);
}

double Scenario::great_circle_distance() const { return std::hypot(xf - x0, yf - y0); }

FlightModel make_flight_model(const Scenario& scenario) {
  return FlightModel(scenario.aircraft, scenario.atmosphere, scenario.wind, scenario.h);
}

}  // namespace cruiseopt
