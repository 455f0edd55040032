#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace cruiseopt {

/**
 * Divergence-free second-order polynomial wind.
 *
 * w_x is a full quadratic in (x/x_scale, y/y_scale) scaled by wxb. w_y is the
 * y-antiderivative of -dw_x/dx plus a quadratic f(x) scaled by wyb, so that
 * dw_x/dx + dw_y/dy = 0 holds identically.
 */
struct PolynomialWind {
  std::array<double, 6> a{};  ///< a0..a5 [-]
  std::array<double, 2> b{};  ///< b0, b1 [-]
  double wxb = 0.0;           ///< [m/s]
  double wyb = 0.0;           ///< [m/s]
  double x_scale = 1.0;       ///< x_f [m]
  double y_scale = 1.0;       ///< y_f [m]
};

struct ConstantWind {
  double wx = 0.0;  ///< [m/s]
  double wy = 0.0;  ///< [m/s]
};

using WindField = std::variant<PolynomialWind, ConstantWind>;

struct WindVelocity {
  double wx;
  double wy;
};

/// Partial derivatives of the wind components [1/s].
struct WindGradient {
  double dwx_dx = 0.0;
  double dwx_dy = 0.0;
  double dwy_dx = 0.0;
  double dwy_dy = 0.0;
};

WindVelocity wind_at(const WindField& field, double x, double y);
WindGradient wind_gradients(const WindField& field, double x, double y);

inline bool is_constant(const WindField& field) {
  return std::holds_alternative<ConstantWind>(field);
}

/// Throws ValidationError on zero scales or non-finite coefficients.
void validate(const WindField& field);

/// Human-readable notes for polynomial coefficients outside [-1, 1]. They are
/// admitted, only flagged.
std::vector<std::string> coefficient_warnings(const WindField& field);

}  // namespace cruiseopt
