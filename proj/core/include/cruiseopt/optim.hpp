#pragma once

#include <functional>

#include <Eigen/Core>

namespace cruiseopt {

struct MinimizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evals = 0;
  int iterations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  int max_evals = 1000;
  double f_tol = 1e-13;  ///< spread of simplex values
  double x_tol = 1e-10;  ///< simplex diameter
};

/// Nelder-Mead downhill simplex with the standard coefficients (1, 2, 0.5, 0.5).
/// Non-finite objective values are treated as +inf.
MinimizeResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x0, const Eigen::VectorXd& initial_step,
                           const NelderMeadOptions& options = {});

/// Objective with gradient; `grad` may be null when only the value is needed.
using ValueGrad = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct SpgOptions {
  int max_iter = 3000;
  double pg_tol = 1e-9;   ///< infinity norm of the projected gradient step
  int memory = 10;        ///< nonmonotone line-search window
  double gamma = 1e-4;
  double step_min = 1e-14;
  double step_max = 1e14;
};

/// Nonmonotone spectral projected gradient on a box. Bounds may be +-inf.
MinimizeResult spg(const ValueGrad& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                   const Eigen::VectorXd& upper, const SpgOptions& options = {});

struct ConstrainedValue {
  double f = 0.0;
  Eigen::VectorXd c;  ///< equality constraints, c(x) = 0
};

struct AugLagOptions {
  int max_outer = 12;
  double rho0 = 10.0;
  double rho_growth = 10.0;
  double rho_max = 1e10;
  double shrink = 0.25;     ///< required reduction of ||c|| per outer step before rho grows
  double feas_tol = 1e-6;   ///< infinity norm
  double f_tol = 1e-10;     ///< relative objective change between feasible outer steps
};

/// Multipliers and penalty of the current outer iteration. The merit is
/// f + mu^T c + rho/2 |c|^2.
struct AugLagState {
  Eigen::VectorXd mu;
  double rho = 0.0;

  double merit(const ConstrainedValue& v) const {
    return v.f + mu.dot(v.c) + 0.5 * rho * v.c.squaredNorm();
  }
};

struct AugLagResult {
  Eigen::VectorXd x;
  ConstrainedValue value;
  AugLagState state;
  int outer_iterations = 0;
  int inner_evals = 0;
  bool feasible = false;
};

/// Minimizes the merit for fixed (mu, rho), starting from x.
using InnerSolver = std::function<MinimizeResult(const AugLagState&, const Eigen::VectorXd&)>;

/// Outer loop: first-order multiplier update, penalty growth when the
/// constraint violation does not shrink fast enough.
AugLagResult augmented_lagrangian(const std::function<ConstrainedValue(const Eigen::VectorXd&)>& eval,
                                  const Eigen::VectorXd& x0, int n_constraints,
                                  const InnerSolver& inner, const AugLagOptions& options = {});

}  // namespace cruiseopt
