#include <gtest/gtest.h>

#include <cmath>

#include "cruiseopt/errors.hpp"
#include "cruiseopt/wind.hpp"
#include "support.hpp"

using namespace cruiseopt;

namespace {

WindField table1_wind() { return test::table1().wind; }

// Direct transcription of the field definition: w_x quadratic, w_y the
// y-antiderivative of -dw_x/dx plus f(x).
WindVelocity oracle_wind(double x, double y) {
  const double a[] = {0.77406, -0.86240, -0.63294, 0.47414, 0.39342, 0.55398};
  const double b[] = {0.00380, -0.14900};
  const double wxb = 40.0, wyb = -20.0, xf = 1.5e6, yf = 7e5;
  const double wx = wxb * (a[0] + a[1] * x / xf + a[2] * x * x / (xf * xf) + a[3] * y / yf +
                           a[4] * y * y / (yf * yf) + a[5] * x * y / (xf * yf));
  const double wy = -wxb * (a[1] * y / xf + 2 * a[2] * x * y / (xf * xf) +
                            a[5] * y * y / (2 * xf * yf)) +
                    wyb * (1 + b[0] * x / xf + b[1] * x * x / (xf * xf));
  return {wx, wy};
}

}  // namespace

TEST(Wind, PolynomialAtOrigin) {
  const WindVelocity w = wind_at(table1_wind(), 0.0, 0.0);
  EXPECT_NEAR(w.wx, 0.77406 * 40.0, 1e-12);
  EXPECT_NEAR(w.wy, -20.0, 1e-12);
}

TEST(Wind, PolynomialAtTarget) {
  const WindVelocity w = wind_at(table1_wind(), 1.5e6, 7e5);
  EXPECT_NEAR(w.wx, 28.0104, 1e-12);
  EXPECT_NEAR(w.wy, 17.461413333333333333, 1e-12);
}

TEST(Wind, MatchesIndependentEvaluation) {
  const WindField f = table1_wind();
  test::Sampler rng(21);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-5e5, 2e6), y = rng.uniform(-5e5, 1.2e6);
    const WindVelocity w = wind_at(f, x, y);
    const WindVelocity o = oracle_wind(x, y);
    EXPECT_NEAR(w.wx, o.wx, 1e-11);
    EXPECT_NEAR(w.wy, o.wy, 1e-11);
  }
  // 40-digit reference at an off-grid point.
  const WindVelocity w = wind_at(f, 3e5, -1e5);
  EXPECT_NEAR(w.wx, 20.029163755102040816, 1e-12);
  EXPECT_NEAR(w.wy, -22.976389333333333333, 1e-12);
}

TEST(Wind, ConstantFieldEverywhere) {
  const WindField f = ConstantWind{40.0, -20.0};
  test::Sampler rng(22);
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform(-1e6, 1e6), y = rng.uniform(-1e6, 1e6);
    const WindVelocity w = wind_at(f, x, y);
    EXPECT_EQ(w.wx, 40.0);
    EXPECT_EQ(w.wy, -20.0);
    const WindGradient g = wind_gradients(f, x, y);
    EXPECT_EQ(g.dwx_dx, 0.0);
    EXPECT_EQ(g.dwx_dy, 0.0);
    EXPECT_EQ(g.dwy_dx, 0.0);
    EXPECT_EQ(g.dwy_dy, 0.0);
  }
}

TEST(Wind, DivergenceFreeAtRandomPoints) {
  const WindField f = table1_wind();
  test::Sampler rng(23);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-1e6, 3e6), y = rng.uniform(-1e6, 2e6);
    const WindGradient g = wind_gradients(f, x, y);
    const double scale = std::max({std::abs(g.dwx_dx), std::abs(g.dwx_dy), std::abs(g.dwy_dx),
                                   std::abs(g.dwy_dy)});
    EXPECT_LT(std::abs(g.dwx_dx + g.dwy_dy), 1e-12 * scale) << x << " " << y;
  }
}

TEST(Wind, GradientsMatchFiniteDifferences) {
  const WindField f = table1_wind();
  test::Sampler rng(24);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-2e5, 1.7e6), y = rng.uniform(-3e5, 9e5);
    const double h = 1.0;
    const WindVelocity xp = wind_at(f, x + h, y), xm = wind_at(f, x - h, y);
    const WindVelocity yp = wind_at(f, x, y + h), ym = wind_at(f, x, y - h);
    const WindGradient g = wind_gradients(f, x, y);
    const Eigen::Vector4d an(g.dwx_dx, g.dwx_dy, g.dwy_dx, g.dwy_dy);
    const Eigen::Vector4d fd((xp.wx - xm.wx) / (2 * h), (yp.wx - ym.wx) / (2 * h),
                             (xp.wy - xm.wy) / (2 * h), (yp.wy - ym.wy) / (2 * h));
    EXPECT_LT(test::rel_err(an, fd), 1e-7);
  }
}

TEST(Wind, ZeroScaleRejected) {
  PolynomialWind p = std::get<PolynomialWind>(table1_wind());
  p.x_scale = 0.0;
  EXPECT_THROW(validate(WindField{p}), ValidationError);
}

TEST(Wind, OutOfRangeCoefficientWarnsOnly) {
  PolynomialWind p = std::get<PolynomialWind>(table1_wind());
  EXPECT_TRUE(coefficient_warnings(WindField{p}).empty());
  p.a[3] = 1.7;
  EXPECT_NO_THROW(validate(WindField{p}));
  const auto w = coefficient_warnings(WindField{p});
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NE(w[0].find("a3"), std::string::npos);
}
