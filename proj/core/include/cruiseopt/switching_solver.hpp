#pragma once

#include <cstdint>

#include "cruiseopt/optim.hpp"
#include "cruiseopt/solution.hpp"

namespace cruiseopt {

struct SolverOptions {
  int starts = 8;
  std::uint64_t seed = 0;
  int threads = 1;  ///< multi-start workers; results do not depend on it
  IntegratorOptions integrator{};
  int explore_steps = 100;  ///< steps per arc during the multi-start phase
  NelderMeadOptions inner{150, 1e-12, 1e-9};
  AugLagOptions outer{6};
  bool polish = true;   ///< reduced-space first-order refinement after the AL phase
  Tolerances tolerances{};
};

/**
 * Heading for a constant wind given the arrival time:
 * tan chi0 = (yf - Wy tf - y0) / (xf - Wx tf - x0), resolved with atan2.
 * Throws GeometryError when both components vanish.
 */
double chi0_constant_wind(const Scenario& scenario, double tf);

/// The deterministic candidate list before shuffling (18 entries).
std::vector<ArcSchedule> start_grid(const Scenario& scenario);

/// Objective and scaled terminal constraints of one schedule.
ConstrainedValue evaluate_schedule(const ArcSchedule& schedule, const Scenario& scenario,
                                   const FlightModel& model, const IntegratorOptions& options);

/**
 * Switching-point program over (chi0, t1, t2, tf), bang-singular-bang
 * structure, augmented Lagrangian around Nelder-Mead from several starts.
 * For alpha = 0 the determinant-transport law is used on the singular arc.
 * Never throws for numerical failures; they are recorded per start and
 * `converged` is false when no start is feasible.
 */
Solution solve_indirect(const Scenario& scenario, const SolverOptions& options = {});

/// Integrates a given schedule and fills trajectory, cost, residual and
/// co-states (when available) without optimizing.
Solution evaluate_indirect(const Scenario& scenario, const ArcSchedule& schedule,
                           const IntegratorOptions& options, double feas_tol = 1e-6);

}  // namespace cruiseopt
