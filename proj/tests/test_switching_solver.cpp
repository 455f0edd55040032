#include <gtest/gtest.h>

#include <cmath>

#include "cruiseopt/errors.hpp"
#include "cruiseopt/switching_solver.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace cruiseopt;

namespace {

SolverOptions quick(std::uint64_t seed = 0) {
  SolverOptions o;
  o.starts = 2;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(ConstantWindHeading, MatchesClosedForm) {
  const Scenario sc = test::constant_wind();
  const double tf = 6000.0;
  // W = (40, -20): the drift is removed from the route before taking the bearing.
  EXPECT_NEAR(chi0_constant_wind(sc, tf), std::atan2(7e5 + 20 * tf, 1.5e6 - 40 * tf), 1e-15);
}

TEST(ConstantWindHeading, ResolvesQuadrant) {
  Scenario sc = test::constant_wind();
  sc.xf = -1.5e6;
  sc.yf = -7e5;
  const double chi = chi0_constant_wind(sc, 5000.0);
  EXPECT_LT(chi, -M_PI / 2);
  EXPECT_GT(chi, -M_PI);
}

TEST(ConstantWindHeading, CancellingDriftThrows) {
  Scenario sc = test::constant_wind();
  sc.xf = 40.0 * 5000.0;
  sc.yf = -20.0 * 5000.0;
  EXPECT_THROW(chi0_constant_wind(sc, 5000.0), GeometryError);
}

TEST(StartGrid, SizeAndValidity) {
  const auto g = start_grid(test::table1());
  EXPECT_EQ(g.size(), 18u);
  for (const auto& s : g) {
    EXPECT_NO_THROW(s.validate());
    EXPECT_LT(s.t1, s.t2);
    EXPECT_LT(s.t2, s.tf);
  }
  // Constant wind fixes chi0 from tf, so heading offsets are dropped.
  const Scenario cw = test::constant_wind();
  const auto gc = start_grid(cw);
  EXPECT_EQ(gc.size(), 6u);
  for (const auto& s : gc) EXPECT_DOUBLE_EQ(s.chi0, chi0_constant_wind(cw, s.tf));
}

TEST(EvaluateSchedule, ReferenceScheduleIsFeasible) {
  const Scenario sc = test::table1();
  const ConstrainedValue v =
      evaluate_schedule(test::table1_schedule(), sc, make_flight_model(sc), IntegratorOptions{});
  EXPECT_LT(v.c.cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(v.f * 1e4, test::kTable1Cost, 1e-6);
}

TEST(SolveIndirect, ConvergesWithConsistentReport) {
  const Scenario sc = test::table1();
  const Solution sol = solve_indirect(sc, quick());
  ASSERT_TRUE(sol.converged);
  EXPECT_LE(sol.violation, 1e-6);
  EXPECT_EQ(sol.cost, objective(sc.alpha, sol.trajectory.back().t, sol.trajectory.back().x[kM]));
  EXPECT_NEAR(sol.cost, test::kTable1Cost, 1e-6 * std::abs(test::kTable1Cost));
  EXPECT_TRUE(sol.verification.passed());
  ASSERT_EQ(sol.starts.size(), 2u);
  // The reported start is the best feasible one.
  const StartReport& best = sol.starts[sol.best_start];
  EXPECT_TRUE(best.feasible);
  for (const auto& r : sol.starts) {
    if (r.feasible) {
      EXPECT_LE(best.cost, r.cost + 1e-9 * std::abs(r.cost));
    }
  }
}

TEST(SolveIndirect, DeterministicAcrossThreadCounts) {
  const Scenario sc = test::table1();
  SolverOptions a = quick(7), b = quick(7);
  b.threads = 2;
  const Solution ra = solve_indirect(sc, a);
  const Solution rb = solve_indirect(sc, b);
  EXPECT_EQ(ra.schedule.t1, rb.schedule.t1);
  EXPECT_EQ(ra.schedule.t2, rb.schedule.t2);
  EXPECT_EQ(ra.schedule.tf, rb.schedule.tf);
  EXPECT_EQ(ra.schedule.chi0, rb.schedule.chi0);
  EXPECT_EQ(ra.cost, rb.cost);
  EXPECT_EQ(ra.best_start, rb.best_start);
}

TEST(SolveIndirect, ConstantWindHeadingStaysFixed) {
  const Scenario sc = test::constant_wind();
  const Solution sol = solve_indirect(sc, quick());
  ASSERT_TRUE(sol.converged);
  double drift = 0;
  for (const auto& s : sol.trajectory.samples) {
    drift = std::max(drift, std::abs(s.heading - sol.schedule.chi0));
  }
  EXPECT_LT(drift, 1e-10);
  EXPECT_NEAR(sol.schedule.chi0, chi0_constant_wind(sc, sol.trajectory.back().t), 1e-8);
  EXPECT_LT(std::abs(sol.trajectory.back().costate[kM] - (sc.alpha - 1)), 1e-4);
}

TEST(SolveIndirect, FullThrustLimitIsBangBang) {
  const Scenario sc = test::table1(1.0);
  const Solution sol = solve_indirect(sc, quick());
  ASSERT_TRUE(sol.converged);
  EXPECT_EQ(sol.schedule.t1, sol.schedule.t2);
  EXPECT_NEAR(sol.trajectory.back().costate[kM], 0.0, 1e-12);
  EXPECT_TRUE(sol.verification.passed());
}

TEST(SolveIndirect, UnreachableTargetReportsFailure) {
  Scenario sc = test::table1();
  sc.xf = 4e7;  // beyond the fuel on board
  SolverOptions o = quick();
  o.starts = 1;
  Solution sol;
  ASSERT_NO_THROW(sol = solve_indirect(sc, o));
  EXPECT_FALSE(sol.converged);
  ASSERT_EQ(sol.starts.size(), 1u);
  EXPECT_FALSE(sol.starts[0].feasible);
}
