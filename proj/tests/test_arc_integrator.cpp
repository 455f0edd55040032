#include <gtest/gtest.h>

#include <cmath>

#include "cruiseopt/errors.hpp"
#include "cruiseopt/switching_solver.hpp"
#include "reference.hpp"
#include "support.hpp"

using namespace cruiseopt;

namespace {

IntegratorOptions steps(int n) {
  IntegratorOptions o;
  o.steps_per_arc = n;
  return o;
}

Solution evaluated(const Scenario& sc, const ArcSchedule& s, const IntegratorOptions& o = {}) {
  Solution sol = evaluate_indirect(sc, s, o);
  sol.verification = verify_solution(sol);
  return sol;
}

double scaled_error(const StateVector& a, const StateVector& b) {
  return (a - b).cwiseQuotient(Scaling{}.state).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Schedule, RejectsMisorderedTimes) {
  EXPECT_THROW((ArcSchedule{20, 10, 30, 0}.validate()), DomainError);
  EXPECT_THROW((ArcSchedule{10, 40, 30, 0}.validate()), DomainError);
  EXPECT_THROW((ArcSchedule{-1, 10, 30, 0}.validate()), DomainError);
  EXPECT_THROW((ArcSchedule{0, 0, 0, 0}.validate()), DomainError);
  EXPECT_NO_THROW((ArcSchedule{0, 0, 30, 0}.validate()));
  EXPECT_NO_THROW((ArcSchedule{30, 30, 30, 0}.validate()));
}

TEST(Integrator, ArcLabelsAndJunctions) {
  const Scenario sc = test::table1();
  const Trajectory tr = integrate_arcs(test::table1_schedule(), sc, make_flight_model(sc), steps(50));
  ASSERT_EQ(tr.samples.size(), 151u);
  for (std::size_t i = 1; i < tr.samples.size(); ++i) {
    EXPECT_GT(tr.samples[i].t, tr.samples[i - 1].t);
    EXPECT_GE(tr.samples[i].arc, tr.samples[i - 1].arc);
  }
  EXPECT_EQ(tr.samples.front().arc, 0);
  EXPECT_EQ(tr.samples.back().arc, 2);
  EXPECT_EQ(tr.samples.front().throttle, sc.pi_max);
  EXPECT_EQ(tr.samples.back().throttle, sc.pi_min);
  EXPECT_DOUBLE_EQ(tr.back().t, test::table1_schedule().tf);
}

TEST(Integrator, TerminalMatchesFullIntegration) {
  const Scenario sc = test::table1();
  const FlightModel m = make_flight_model(sc);
  const auto o = steps(80);
  const Trajectory tr = integrate_arcs(test::table1_schedule(), sc, m, o);
  const AugmentedState end = propagate_terminal(test::table1_schedule(), sc, m, o);
  EXPECT_EQ(end.x, tr.back().x);
  EXPECT_EQ(end.heading, tr.back().heading);
}

TEST(Integrator, FourthOrderConvergence) {
  const Scenario sc = test::table1();
  const FlightModel m = make_flight_model(sc);
  const ArcSchedule s = test::table1_schedule();
  const StateVector ref = propagate_terminal(s, sc, m, steps(3200)).x;
  const double e1 = scaled_error(propagate_terminal(s, sc, m, steps(25)).x, ref);
  const double e2 = scaled_error(propagate_terminal(s, sc, m, steps(50)).x, ref);
  const double e3 = scaled_error(propagate_terminal(s, sc, m, steps(100)).x, ref);
  EXPECT_GE(std::log2(e1 / e2), 3.8);
  EXPECT_GE(std::log2(e2 / e3), 3.8);
}

TEST(Integrator, ConstantWindKeepsHeading) {
  const Scenario sc = test::constant_wind();
  const Trajectory tr =
      integrate_arcs(test::constant_wind_schedule(), sc, make_flight_model(sc), steps(100));
  for (const auto& s : tr.samples) EXPECT_LT(std::abs(s.heading - tr.samples[0].heading), 1e-12);
}

TEST(Integrator, BangBangHasNoSingularSamples) {
  const Scenario sc = test::table1(1.0);
  const Trajectory tr =
      integrate_arcs(test::bang_bang_schedule(), sc, make_flight_model(sc), steps(100));
  for (const auto& s : tr.samples) EXPECT_NE(s.arc, 1);
  EXPECT_EQ(tr.samples.size(), 201u);
}

TEST(Integrator, EmptyOuterArcs) {
  const Scenario sc = test::table1();
  const FlightModel m = make_flight_model(sc);
  ArcSchedule s{0.0, 3000.0, 3000.0, 0.7};
  const Trajectory tr = integrate_arcs(s, sc, m, steps(40));
  EXPECT_EQ(tr.samples.size(), 41u);
  for (const auto& smp : tr.samples) EXPECT_EQ(smp.arc, 1);
}

TEST(Integrator, LeavingAdmissibleRegionThrows) {
  Scenario sc = test::table1();
  const FlightModel m = make_flight_model(sc);
  // Idle thrust for a very long time bleeds the airspeed to zero.
  EXPECT_THROW(integrate_arcs({0.0, 0.0, 2e5, 0.7}, sc, m, steps(400)), IntegrationError);
}

TEST(Costates, ConvergedScheduleSatisfiesNecessaryConditions) {
  const Scenario sc = test::table1();
  const Solution sol = evaluated(sc, test::table1_schedule());
  ASSERT_TRUE(sol.trajectory.has_costates);
  EXPECT_NEAR(sol.cost, test::kTable1Cost, 1e-6);
  const auto& v = sol.verification;
  EXPECT_LE(v.find("hamiltonian")->measured, 1e-5);
  EXPECT_EQ(v.find("switching_sign")->status, CheckStatus::kPass);
  EXPECT_EQ(v.find("legendre_clebsch")->status, CheckStatus::kPass);
  EXPECT_LT(v.find("transversality")->measured, 1e-4);
  EXPECT_TRUE(v.passed());
  const auto& last = sol.trajectory.back();
  EXPECT_NEAR(last.costate[kM], sc.alpha - 1.0, 1e-4);
  EXPECT_NEAR(last.hamiltonian, -sc.alpha, 1e-9);
}

TEST(Costates, SingularArcConsistency) {
  const Scenario sc = test::table1();
  const FlightModel m = make_flight_model(sc);
  const Trajectory tr = reconstruct_costates(integrate_arcs(test::table1_schedule(), sc, m), sc, m);
  const SingularArcConsistency c = singular_arc_consistency(tr, sc, m);
  EXPECT_GT(c.interior_points, 100);
  EXPECT_LT(c.forward_step_max_rel, 1e-6);
  EXPECT_LT(c.backward_max_rel, 1e-6);
  EXPECT_LT(c.max_abs_s2, 1e-6);
}

TEST(Costates, BangBangReconstruction) {
  const Scenario sc = test::table1(1.0);
  const Solution sol = evaluated(sc, test::bang_bang_schedule());
  ASSERT_TRUE(sol.trajectory.has_costates);
  EXPECT_NEAR(sol.trajectory.back().costate[kM], 0.0, 1e-12);
  double hmax = 0;
  for (const auto& s : sol.trajectory.samples) hmax = std::max(hmax, std::abs(s.hamiltonian + 1.0));
  EXPECT_LT(hmax, 1e-5);
  EXPECT_TRUE(sol.verification.passed());
  EXPECT_EQ(sol.verification.find("legendre_clebsch")->status, CheckStatus::kSkipped);
}

TEST(Costates, Alpha0HasNoCostatesButTransportsDeterminant) {
  const Scenario sc = test::table1(0.0);
  const FlightModel m = make_flight_model(sc);
  IntegratorOptions o;
  o.law = SingularLaw::kDeterminantTransport;
  const Solution sol = evaluated(sc, test::alpha0_schedule(), o);
  EXPECT_FALSE(sol.trajectory.has_costates);
  EXPECT_LT(sol.violation, 1e-6);
  double d0 = kNaN, drift = 0;
  for (const auto& s : sol.trajectory.samples) {
    if (s.arc != 1) continue;
    const double d = singular_det(m, s.x, s.heading);
    if (std::isnan(d0)) d0 = d;
    drift = std::max(drift, std::abs(d - d0));
  }
  EXPECT_LT(drift, 1e-6 * std::abs(d0));
}
