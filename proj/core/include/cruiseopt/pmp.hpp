#pragma once

#include <Eigen/Core>

#include "cruiseopt/dynamics.hpp"

namespace cruiseopt {

/**
 * @brief Reference magnitudes for the nondimensional co-state computations.
 *
 * Scaled state is X / state and scaled time is t / time. Scaled co-states are
 * lambda * state / time, which leaves the Hamiltonian and the switching
 * function numerically unchanged.
 */
struct Scaling {
  StateVector state{1e6, 1e6, 1e2, 1e4};
  double time = 1e3;

  StateVector costate_factor() const { return state / time; }
  CostateVector to_scaled(const CostateVector& lambda) const {
    return lambda.cwiseProduct(costate_factor());
  }
  CostateVector to_physical(const CostateVector& scaled) const {
    return scaled.cwiseQuotient(costate_factor());
  }
};

struct PmpOptions {
  double eps_det = 1e-10;        ///< minimum |det| of the row-normalized singular matrix
  double eps_den = 1e-12;        ///< minimum |<lambda, D>| (scaled)
  double fd_step = 1e-6;         ///< central-difference step per scaled coordinate
  double residual_tol = 1e-9;    ///< post-solve residual bound (scaled)
  Scaling scaling{};
};

/// H = <lambda, F(X, U)> on interior arcs.
double hamiltonian(const FlightModel& model, const StateVector& x, const CostateVector& lambda,
                   const Controls& u);

/// dlambda/dt = -(dQ/dX + Pi dP/dX)^T lambda.
CostateVector costate_rhs(const FlightModel& model, const StateVector& x,
                          const CostateVector& lambda, const Controls& u);

/// S = <lambda, P(X)>.
double switching_function(const FlightModel& model, const StateVector& x,
                          const CostateVector& lambda);

/// Lie bracket A = (dP/dX) Q - (dQ/dX) P from analytic Jacobians. <lambda, A>
/// is the first time derivative of S for any throttle.
StateVector lie_A(const FlightModel& model, const StateVector& x, double heading);

struct LieBD {
  StateVector B;  ///< (dA/dX) Q - (dQ/dX) A
  StateVector D;  ///< (dA/dX) P - (dP/dX) A
};

/// Second-level brackets. dA/dX comes from central differences of lie_A with
/// step fd_step * max(1, |X_i|) in scaled coordinates.
LieBD lie_B_D(const FlightModel& model, const StateVector& x, double heading,
              const PmpOptions& options = {});

/// dA/dchi by central differences.
StateVector dA_dchi(const FlightModel& model, const StateVector& x, double heading,
                    const PmpOptions& options = {});

/**
 * @brief Everything needed for the singular-arc feedback at one point.
 *
 * `matrix` is the scaled singular system with rows (P, A, Q, heading row)
 * acting on scaled co-states; `rhs` is (0, 0, -alpha, 0).
 */
struct SingularContext {
  StateVector Q;
  StateVector P;
  StateVector A;
  StateVector B;
  StateVector D;
  StateVector dA_dchi;
  Eigen::Matrix4d matrix;
  Eigen::Vector4d rhs;
  double alpha = 0.0;
};

SingularContext singular_context(const FlightModel& model, const StateVector& x, double heading,
                                 double alpha, const PmpOptions& options = {});

/// Scaled singular matrix (without row normalization).
Eigen::Matrix4d singular_matrix(const FlightModel& model, const StateVector& x, double heading,
                                const PmpOptions& options = {});

/// det of the scaled singular matrix. Proportional to the physical
/// determinant by a constant factor.
double singular_det(const FlightModel& model, const StateVector& x, double heading,
                    const PmpOptions& options = {});

/// det of the scaled singular matrix after each row is normalized to unit
/// length. This is the quantity compared against eps_det.
double normalized_singular_det(const Eigen::Matrix4d& matrix);

/**
 * Solves S = 0, S' = 0, H = -alpha and dH/dchi = 0 for the co-states with a
 * pivoted LU on the row-normalized scaled system. Returns physical co-states.
 *
 * Throws IllConditionedError if |det| <= eps_det after row scaling, or if a
 * scaled residual exceeds residual_tol.
 */
CostateVector solve_costates_on_singular(const FlightModel& model, const StateVector& x,
                                         double heading, double alpha,
                                         const PmpOptions& options = {});

/// Same, reusing an already assembled context.
CostateVector solve_costates_on_singular(const SingularContext& ctx, const PmpOptions& options);

struct SingularFeedback {
  double throttle = 0.0;     ///< unclamped
  CostateVector costate;     ///< physical co-states from the algebraic solve
  double legendre_clebsch;   ///< -<lambda, D>, scaled
  double det;                ///< row-normalized singular determinant
};

/**
 * Singular throttle from S'' = 0:
 *
 *   Pi = -(<lambda, B> + <lambda, dA/dchi> dchi/dt) / <lambda, D>
 *
 * with lambda from solve_costates_on_singular. The value does not depend on
 * alpha (numerator and denominator are both linear in lambda). Throws
 * SingularDenominatorError when |<lambda, D>| (scaled) <= eps_den.
 */
SingularFeedback singular_throttle(const FlightModel& model, const StateVector& x, double heading,
                                   double heading_rate, double alpha,
                                   const PmpOptions& options = {});

/**
 * Singular throttle for alpha = 0, where the singular system is homogeneous
 * and det = 0 must be transported along the arc:
 *
 *   Pi = -(grad_X det . Q + d det/dchi . dchi/dt) / (grad_X det . P)
 *
 * Throws DegenerateArcError when the denominator vanishes.
 */
double singular_throttle_alpha0(const FlightModel& model, const StateVector& x, double heading,
                                double heading_rate, const PmpOptions& options = {});

/// -<lambda, D> in scaled units for a given co-state.
double legendre_clebsch(const FlightModel& model, const StateVector& x, double heading,
                        const CostateVector& lambda, const PmpOptions& options = {});

}  // namespace cruiseopt
