#pragma once

#include <limits>
#include <vector>

#include "cruiseopt/pmp.hpp"
#include "cruiseopt/scenario.hpp"

namespace cruiseopt {

/// Switching structure Pi_max on [0, t1), singular on [t1, t2], Pi_min on (t2, tf].
struct ArcSchedule {
  double t1 = 0.0;    ///< [s]
  double t2 = 0.0;    ///< [s]
  double tf = 0.0;    ///< [s]
  double chi0 = 0.0;  ///< initial heading [rad]

  /// Throws DomainError unless 0 <= t1 <= t2 <= tf and tf > 0.
  void validate() const;
};

enum class SingularLaw {
  kCostateFeedback,        ///< S'' = 0 with algebraic co-states (alpha > 0)
  kDeterminantTransport,   ///< d/dt det = 0 (alpha = 0)
};

struct IntegratorOptions {
  int steps_per_arc = 400;
  SingularLaw law = SingularLaw::kCostateFeedback;
  PmpOptions pmp{};
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Sample {
  double t = 0.0;
  StateVector x = StateVector::Zero();
  double heading = 0.0;
  double throttle = 0.0;
  int arc = 0;  ///< 0: Pi_max, 1: singular, 2: Pi_min. Junction samples belong to the arc they open.

  CostateVector costate = CostateVector::Constant(kNaN);
  double switching = kNaN;
  double hamiltonian = kNaN;
  double legendre_clebsch = kNaN;  ///< -<lambda, D>, scaled
  double det = kNaN;               ///< row-normalized singular determinant

  double mach = kNaN;
  double cas = kNaN;
  bool mach_ok = true;
  bool cas_ok = true;
};

struct Trajectory {
  ArcSchedule schedule;
  std::vector<Sample> samples;
  int clamp_count = 0;         ///< singular-throttle evaluations clamped to the bounds
  bool has_costates = false;

  const Sample& back() const { return samples.back(); }
};

/// Evaluates the middle-arc throttle at one point (unclamped).
double singular_control(const FlightModel& model, const StateVector& x, double heading,
                        double alpha, const IntegratorOptions& options);

/**
 * Integrates (X, chi) with classical RK4, steps_per_arc fixed steps on each
 * non-empty arc, heading from the Zermelo identity on every arc. The middle
 * arc uses the singular feedback clamped to [pi_min, pi_max].
 *
 * Throws FeedbackError subclasses (with the failing time attached) and
 * IntegrationError when the state leaves the admissible region.
 */
Trajectory integrate_arcs(const ArcSchedule& schedule, const Scenario& scenario,
                          const FlightModel& model, const IntegratorOptions& options = {});

/// Terminal augmented state only; same arithmetic as integrate_arcs.
AugmentedState propagate_terminal(const ArcSchedule& schedule, const Scenario& scenario,
                                  const FlightModel& model, const IntegratorOptions& options,
                                  int* clamp_count = nullptr);

/**
 * Fills co-states and diagnostics. On [t1, t2] co-states come from the
 * algebraic singular solve; on [0, t1] they are integrated backward from
 * lambda(t1) and on (t2, tf] forward from lambda(t2). This needs alpha > 0
 * and the co-state feedback law.
 *
 * A bang-bang schedule (0 < t1 = t2 < tf) is handled separately: lambda(tf)
 * is fixed by lambda_m(tf) = alpha - 1, the final heading, H(tf) = -alpha
 * and S(t1) = 0, so transversality holds by construction there.
 *
 * Otherwise returns the trajectory with has_costates = false.
 */
Trajectory reconstruct_costates(const Trajectory& trajectory, const Scenario& scenario,
                                const FlightModel& model, const IntegratorOptions& options = {});

/**
 * Independent co-state propagation across the singular arc.
 *
 * The co-state ODE is unstable forward in time along the arc (the speed
 * co-state grows with the drag slope), so a single forward sweep from t1
 * amplifies rounding errors by many orders of magnitude on long arcs. That
 * sweep is reported but the forward comparison that means something is the
 * one-step one, restarted from the algebraic co-state at every sample. The
 * backward sweep from t2 is stable and runs over the whole arc.
 */
struct SingularArcConsistency {
  double forward_max_rel = kNaN;       ///< one sweep from lambda(t1) vs algebraic
  double forward_step_max_rel = kNaN;  ///< one RK4 step from each algebraic sample vs the next
  double backward_max_rel = kNaN;      ///< one sweep from lambda(t2) backwards vs algebraic
  double max_abs_s2 = kNaN;  ///< |d^2 S / dt^2| (scaled time) by central differences of S
                             ///< evaluated with the backward-swept co-states
  int interior_points = 0;
};

SingularArcConsistency singular_arc_consistency(const Trajectory& trajectory,
                                                const Scenario& scenario,
                                                const FlightModel& model,
                                                const IntegratorOptions& options = {});

}  // namespace cruiseopt
