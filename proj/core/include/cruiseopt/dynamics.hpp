#pragma once

#include <Eigen/Core>

#include "cruiseopt/performance.hpp"
#include "cruiseopt/wind.hpp"

namespace cruiseopt {

/// State vector (x [m], y [m], v [m/s], m [kg]).
using StateVector = Eigen::Vector4d;
/// Co-state vector (lambda_x, lambda_y, lambda_v, lambda_m), physical units.
using CostateVector = Eigen::Vector4d;

enum StateIndex : int { kX = 0, kY = 1, kV = 2, kM = 3 };

struct Controls {
  double heading = 0.0;   ///< chi [rad]
  double throttle = 0.0;  ///< Pi [-]
};

/// State extended with the heading, which is integrated alongside it.
struct AugmentedState {
  StateVector x = StateVector::Zero();
  double heading = 0.0;
};

/**
 * @brief Aircraft, atmosphere and wind at a fixed cruise altitude.
 *
 * Density and maximum thrust depend on altitude only, so they are evaluated
 * once at construction.
 */
class FlightModel {
 public:
  FlightModel(AircraftModel aircraft, Atmosphere atmosphere, WindField wind, double altitude);

  const AircraftModel& aircraft() const noexcept { return aircraft_; }
  const Atmosphere& atmosphere() const noexcept { return atmosphere_; }
  const WindField& wind() const noexcept { return wind_; }
  double altitude() const noexcept { return altitude_; }
  double density() const noexcept { return density_; }
  double thrust() const noexcept { return thrust_; }

  DragValue drag(double m, double v) const;
  FuelFlowCoeff fuel_flow(double v) const { return fuel_flow_coeff(aircraft_, v); }
  EnvelopeReport envelope(double v) const;

 private:
  AircraftModel aircraft_;
  Atmosphere atmosphere_;
  WindField wind_;
  double altitude_;
  double density_;
  double thrust_;
};

/// Drift field Q(X, chi) = (v cos chi + w_x, v sin chi + w_y, -D/m, 0).
StateVector eval_Q(const FlightModel& model, const StateVector& x, double heading);
/// Control field P(X) = (0, 0, Tmax/m, -Cs(v) Tmax).
StateVector eval_P(const FlightModel& model, const StateVector& x);
/// F = Q + Pi P.
StateVector eval_F(const FlightModel& model, const StateVector& x, const Controls& u);

Eigen::Matrix4d jacobian_Q(const FlightModel& model, const StateVector& x, double heading);
Eigen::Matrix4d jacobian_P(const FlightModel& model, const StateVector& x);
/// dQ/dchi = (-v sin chi, v cos chi, 0, 0).
StateVector dQ_dchi(const StateVector& x, double heading);

/**
 * Heading rate along an optimal interior arc (Zermelo navigation identity),
 * written as
 *
 *   dchi/dt = sin^2 chi dw_y/dx + sin chi cos chi (dw_x/dx - dw_y/dy) - cos^2 chi dw_x/dy
 *
 * which has no poles at chi = +-pi/2.
 */
double zermelo_rhs(double heading, const WindGradient& grads);

/// Zermelo heading rate at a state.
double heading_rate(const FlightModel& model, const StateVector& x, double heading);

}  // namespace cruiseopt
