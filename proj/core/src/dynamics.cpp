#include "cruiseopt/dynamics.hpp"

#include <cmath>
#include <utility>

namespace cruiseopt {

FlightModel::FlightModel(AircraftModel aircraft, Atmosphere atmosphere, WindField wind,
                         double altitude)
    : aircraft_(std::move(aircraft)),
      atmosphere_(std::move(atmosphere)),
      wind_(std::move(wind)),
      altitude_(altitude) {
  aircraft_.validate();
  atmosphere_.validate();
  validate(wind_);
  density_ = air_density(atmosphere_, altitude_);
  thrust_ = max_thrust(aircraft_, altitude_);
}

DragValue FlightModel::drag(double m, double v) const {
  return drag_at_density(aircraft_, density_, atmosphere_.g, m, v);
}

EnvelopeReport FlightModel::envelope(double v) const {
  return check_envelope(aircraft_, atmosphere_, v, altitude_);
}

StateVector eval_Q(const FlightModel& model, const StateVector& x, double heading) {
  const auto w = wind_at(model.wind(), x[kX], x[kY]);
  const double d = model.drag(x[kM], x[kV]).value;
  return {x[kV] * std::cos(heading) + w.wx, x[kV] * std::sin(heading) + w.wy, -d / x[kM], 0.0};
}

StateVector eval_P(const FlightModel& model, const StateVector& x) {
  const double t = model.thrust();
  return {0.0, 0.0, t / x[kM], -model.fuel_flow(x[kV]).value * t};
}

StateVector eval_F(const FlightModel& model, const StateVector& x, const Controls& u) {
  return eval_Q(model, x, u.heading) + u.throttle * eval_P(model, x);
}

Eigen::Matrix4d jacobian_Q(const FlightModel& model, const StateVector& x, double heading) {
  const auto g = wind_gradients(model.wind(), x[kX], x[kY]);
  const auto d = model.drag(x[kM], x[kV]);
  const double m = x[kM];
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(0, 0) = g.dwx_dx;
  j(0, 1) = g.dwx_dy;
  j(0, 2) = std::cos(heading);
  j(1, 0) = g.dwy_dx;
  j(1, 1) = g.dwy_dy;
  j(1, 2) = std::sin(heading);
  j(2, 2) = -d.d_dv / m;
  j(2, 3) = -d.d_dm / m + d.value / (m * m);
  return j;
}

Eigen::Matrix4d jacobian_P(const FlightModel& model, const StateVector& x) {
  const double t = model.thrust();
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(2, 3) = -t / (x[kM] * x[kM]);
  j(3, 2) = -model.fuel_flow(x[kV]).d_dv * t;
  return j;
}

StateVector dQ_dchi(const StateVector& x, double heading) {
  return {-x[kV] * std::sin(heading), x[kV] * std::cos(heading), 0.0, 0.0};
}

double zermelo_rhs(double heading, const WindGradient& g) {
  const double s = std::sin(heading);
  const double c = std::cos(heading);
  return s * s * g.dwy_dx + s * c * (g.dwx_dx - g.dwy_dy) - c * c * g.dwx_dy;
}

double heading_rate(const FlightModel& model, const StateVector& x, double heading) {
  return zermelo_rhs(heading, wind_gradients(model.wind(), x[kX], x[kY]));
}

}  // namespace cruiseopt
