#include "cruiseopt/wind.hpp"

#include <cmath>

#include "cruiseopt/errors.hpp"

namespace cruiseopt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// With X = x/xs, Y = y/ys and W = wxb, V = wyb:
//
//   w_x = W (a0 + a1 X + a2 X^2 + a3 Y + a4 Y^2 + a5 X Y)
//   dw_x/dx = (W/xs) (a1 + 2 a2 X + a5 Y)
//
// Integrating -dw_x/dx over y (dy = ys dY):
//
//   -(W ys/xs) (a1 Y + 2 a2 X Y + a5 Y^2 / 2)
//
// and adding f(x) = V (1 + b0 X + b1 X^2) gives w_y. Then
//   dw_y/dy = -(W/xs) (a1 + 2 a2 X + a5 Y) = -dw_x/dx
//   dw_y/dx = -(W ys/xs^2) 2 a2 Y + (V/xs)(b0 + 2 b1 X)
WindVelocity polynomial_at(const PolynomialWind& p, double x, double y) {
  const double X = x / p.x_scale;
  const double Y = y / p.y_scale;
  const auto& a = p.a;
  const double wx =
      p.wxb * (a[0] + a[1] * X + a[2] * X * X + a[3] * Y + a[4] * Y * Y + a[5] * X * Y);
  const double ratio = p.y_scale / p.x_scale;
  const double wy = -p.wxb * ratio * (a[1] * Y + 2.0 * a[2] * X * Y + 0.5 * a[5] * Y * Y) +
                    p.wyb * (1.0 + p.b[0] * X + p.b[1] * X * X);
  return {wx, wy};
}

WindGradient polynomial_gradients(const PolynomialWind& p, double x, double y) {
  const double X = x / p.x_scale;
  const double Y = y / p.y_scale;
  const auto& a = p.a;
  WindGradient g;
  g.dwx_dx = p.wxb / p.x_scale * (a[1] + 2.0 * a[2] * X + a[5] * Y);
  g.dwx_dy = p.wxb / p.y_scale * (a[3] + 2.0 * a[4] * Y + a[5] * X);
  g.dwy_dy = -g.dwx_dx;
  g.dwy_dx = -p.wxb * p.y_scale / (p.x_scale * p.x_scale) * 2.0 * a[2] * Y +
             p.wyb / p.x_scale * (p.b[0] + 2.0 * p.b[1] * X);
  return g;
}

}  // namespace

WindVelocity wind_at(const WindField& field, double x, double y) {
  return std::visit(Overloaded{
                        [&](const PolynomialWind& p) { return polynomial_at(p, x, y); },
                        [](const ConstantWind& c) { return WindVelocity{c.wx, c.wy}; },
                    },
                    field);
}

WindGradient wind_gradients(const WindField& field, double x, double y) {
  return std::visit(Overloaded{
                        [&](const PolynomialWind& p) { return polynomial_gradients(p, x, y); },
                        [](const ConstantWind&) { return WindGradient{}; },
                    },
                    field);
}

void validate(const WindField& field) {
  std::visit(Overloaded{
                 [](const PolynomialWind& p) {
                   for (std::size_t i = 0; i < p.a.size(); ++i) {
                     if (!std::isfinite(p.a[i])) {
                       throw ValidationError("wind.a" + std::to_string(i), "must be finite");
                     }
                   }
                   for (std::size_t i = 0; i < p.b.size(); ++i) {
                     if (!std::isfinite(p.b[i])) {
                       throw ValidationError("wind.b" + std::to_string(i), "must be finite");
                     }
                   }
                   if (!std::isfinite(p.wxb)) throw ValidationError("wind.wxb", "must be finite");
                   if (!std::isfinite(p.wyb)) throw ValidationError("wind.wyb", "must be finite");
                   if (!std::isfinite(p.x_scale) || p.x_scale == 0.0) {
                     throw ValidationError("xf_m", "wind normalization scale x_f must be nonzero");
                   }
                   if (!std::isfinite(p.y_scale) || p.y_scale == 0.0) {
                     throw ValidationError("yf_m", "wind normalization scale y_f must be nonzero");
                   }
                 },
                 [](const ConstantWind& c) {
                   if (!std::isfinite(c.wx)) throw ValidationError("wind.Wx", "must be finite");
                   if (!std::isfinite(c.wy)) throw ValidationError("wind.Wy", "must be finite");
                 },
             },
             field);
}

std::vector<std::string> coefficient_warnings(const WindField& field) {
  std::vector<std::string> notes;
  if (const auto* p = std::get_if<PolynomialWind>(&field)) {
    for (std::size_t i = 0; i < p->a.size(); ++i) {
      if (std::abs(p->a[i]) > 1.0) {
        notes.push_back("wind coefficient a" + std::to_string(i) + " outside [-1, 1]");
      }
    }
    for (std::size_t i = 0; i < p->b.size(); ++i) {
      if (std::abs(p->b[i]) > 1.0) {
        notes.push_back("wind coefficient b" + std::to_string(i) + " outside [-1, 1]");
      }
    }
  }
  return notes;
}

}  // namespace cruiseopt
