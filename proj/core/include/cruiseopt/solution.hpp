#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cruiseopt/arc_integrator.hpp"

namespace cruiseopt {

/// Outcome of one multi-start candidate.
struct StartReport {
  int index = 0;
  ArcSchedule initial;
  ArcSchedule result;
  double cost = kNaN;
  double violation = kNaN;  ///< infinity norm of the scaled terminal residual
  bool feasible = false;
  int evaluations = 0;
  int failed_evaluations = 0;  ///< integrations aborted during the search
  std::string error;           ///< failure of the final evaluation, empty if none
};

enum class CheckStatus { kPass, kFail, kSkipped };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kSkipped;
  double measured = kNaN;
  double tolerance = kNaN;
  bool informational = false;  ///< reported but never fails the report
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

struct Tolerances {
  double hamiltonian = 1e-5;       ///< |H + alpha|, scaled
  double switching = 1e-6;         ///< |S| on the singular arc, scaled
  double legendre_clebsch = 1e-10; ///< -<lambda, D> >= -tol
  double transversality = 1e-4;    ///< |lambda_m(tf) - (alpha - 1)|
  double heading = 1e-8;           ///< normalized heading-optimality residual
};

/**
 * Result of either solver. The direct baseline fills `trajectory` with one
 * sample per node (arc = -1, no co-states) and leaves `schedule` unset.
 */
struct Solution {
  std::string method;  ///< "indirect" or "direct"
  Scenario scenario;
  ArcSchedule schedule;
  Trajectory trajectory;
  double cost = kNaN;  ///< alpha * tf + (alpha - 1) * m(tf)
  Eigen::Vector3d terminal_residual = Eigen::Vector3d::Constant(kNaN);  ///< [m, m, m/s]
  double violation = kNaN;  ///< infinity norm of the scaled residual
  bool converged = false;
  SingularLaw law = SingularLaw::kCostateFeedback;
  int steps_per_arc = 0;  ///< RK4 steps per arc of the indirect trajectory, 0 for direct
  int iterations = 0;
  int evaluations = 0;
  int restarts = 0;
  int best_start = -1;
  std::vector<StartReport> starts;
  VerificationReport verification;
};

/// (x - xf) / 1e6, (y - yf) / 1e6, (v - vf) / 1e2.
Eigen::Vector3d scaled_terminal_residual(const Scenario& scenario, const StateVector& xf);
Eigen::Vector3d terminal_residual(const Scenario& scenario, const StateVector& xf);

double objective(double alpha, double tf, double mf);

/**
 * Checks a solution against the necessary conditions:
 *   hamiltonian      |H(t) + alpha| everywhere
 *   switching_sign   S < 0 before t1, S > 0 after t2, |S| small in between
 *   legendre_clebsch -<lambda, D> >= -tol on the singular arc
 *   transversality   |lambda_m(tf) - (alpha - 1)|
 *   heading          (lambda_x sin chi - lambda_y cos chi) / |(lambda_x, lambda_y)|
 *   mach_envelope, cas_envelope (informational)
 * Checks needing co-states are skipped when the trajectory has none.
 */
VerificationReport verify_solution(const Solution& solution, const Tolerances& tolerances = {});

}  // namespace cruiseopt
