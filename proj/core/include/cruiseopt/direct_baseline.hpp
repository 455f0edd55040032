#pragma once

#include <optional>

#include <Eigen/Core>

#include "cruiseopt/optim.hpp"
#include "cruiseopt/solution.hpp"

namespace cruiseopt {

/**
 * Piecewise-constant controls on a uniform grid. Interval k covers
 * [k h, (k + 1) h) with h = tf / nodes, so there are `nodes` control pairs
 * and nodes + 1 states.
 */
struct DirectGrid {
  Eigen::VectorXd heading;   ///< chi_k [rad]
  Eigen::VectorXd throttle;  ///< Pi_k
  double tf = 0.0;           ///< [s]

  int nodes() const { return static_cast<int>(heading.size()); }
  /// Throws DomainError unless nodes >= 2, sizes agree, tf > 0 and every
  /// throttle lies in [pi_min, pi_max].
  void validate(const Scenario& scenario) const;
};

struct DirectOptions {
  int nodes = 400;
  SpgOptions inner{4000, 1e-10, 10, 1e-4, 1e-14, 1e14};
  AugLagOptions outer{12};
  std::optional<DirectGrid> warm_start;  ///< must have `nodes` entries when set
};

/// Heading along the straight line to the target, trim throttle at the
/// initial state, tf = distance / v0.
DirectGrid cold_start(const Scenario& scenario, int nodes);

/// Samples the controls of a trajectory at the left end of each interval.
DirectGrid grid_from_trajectory(const Trajectory& trajectory, const Scenario& scenario,
                                int nodes);

/// Forward-Euler rollout. Samples have arc = -1 and no co-states; the last
/// sample repeats the final interval's controls. Throws IntegrationError when
/// the state leaves the admissible region.
Trajectory euler_rollout(const DirectGrid& grid, const Scenario& scenario,
                         const FlightModel& model);

/// Terminal state only.
StateVector euler_terminal(const DirectGrid& grid, const Scenario& scenario,
                           const FlightModel& model);

/// Decision vector of the transcription: heading[0..n), throttle[n..2n), tf / 1e3.
Eigen::VectorXd pack_decision(const DirectGrid& grid);
DirectGrid unpack_decision(const Eigen::VectorXd& z, int nodes);

/// Augmented-Lagrangian merit of the scaled cost and terminal residual at
/// decision vector z. The gradient comes from the discrete adjoint of the
/// Euler recursion. Returns +inf when the rollout fails.
double direct_merit(const Eigen::VectorXd& z, const AugLagState& state, const Scenario& scenario,
                    const FlightModel& model, Eigen::VectorXd* grad);

/**
 * Single-shooting transcription: minimizes the cost over (chi_k, Pi_k, tf)
 * under the terminal equalities with the augmented Lagrangian, each inner
 * problem solved by projected gradient with adjoint gradients. Never throws
 * for numerical failures; `converged` is false when the final point is
 * infeasible.
 */
Solution solve_direct(const Scenario& scenario, const DirectOptions& options = {});

}  // namespace cruiseopt
