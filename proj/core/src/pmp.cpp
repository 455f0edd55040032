#include "cruiseopt/pmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "cruiseopt/errors.hpp"

namespace cruiseopt {

namespace {

// Physical central-difference step for coordinate i.
double fd_step_for(const StateVector& x, int i, const PmpOptions& o) {
  const double s = o.scaling.state[i];
  return s * o.fd_step * std::max(1.0, std::abs(x[i]) / s);
}

Eigen::Matrix4d lie_A_jacobian(const FlightModel& model, const StateVector& x, double heading,
                               const PmpOptions& o) {
  Eigen::Matrix4d j;
  for (int i = 0; i < 4; ++i) {
    const double h = fd_step_for(x, i, o);
    StateVector xp = x;
    StateVector xm = x;
    xp[i] += h;
    xm[i] -= h;
    j.col(i) = (lie_A(model, xp, heading) - lie_A(model, xm, heading)) / (2.0 * h);
  }
  return j;
}

Eigen::Matrix4d assemble_matrix(const StateVector& p, const StateVector& a, const StateVector& q,
                                double heading, const Scaling& sc) {
  const StateVector inv = sc.state.cwiseInverse();
  const double st = sc.time;
  Eigen::Matrix4d m;
  m.row(0) = (st * p.cwiseProduct(inv)).transpose();
  m.row(1) = (st * st * a.cwiseProduct(inv)).transpose();
  m.row(2) = (st * q.cwiseProduct(inv)).transpose();
  m.row(3) << std::tan(heading), -1.0, 0.0, 0.0;
  return m;
}

Eigen::Vector4d row_norms(const Eigen::Matrix4d& m) {
  Eigen::Vector4d n = m.rowwise().norm();
  for (int i = 0; i < 4; ++i) {
    if (n[i] == 0.0) n[i] = 1.0;
  }
  return n;
}

}  // namespace

double hamiltonian(const FlightModel& model, const StateVector& x, const CostateVector& lambda,
                   const Controls& u) {
  return lambda.dot(eval_F(model, x, u));
}

CostateVector costate_rhs(const FlightModel& model, const StateVector& x,
                          const CostateVector& lambda, const Controls& u) {
  const Eigen::Matrix4d j = jacobian_Q(model, x, u.heading) + u.throttle * jacobian_P(model, x);
  return -j.transpose() * lambda;
}

double switching_function(const FlightModel& model, const StateVector& x,
                          const CostateVector& lambda) {
  return lambda.dot(eval_P(model, x));
}

StateVector lie_A(const FlightModel& model, const StateVector& x, double heading) {
  return jacobian_P(model, x) * eval_Q(model, x, heading) -
         jacobian_Q(model, x, heading) * eval_P(model, x);
}

LieBD lie_B_D(const FlightModel& model, const StateVector& x, double heading,
              const PmpOptions& options) {
  const Eigen::Matrix4d da = lie_A_jacobian(model, x, heading, options);
  const StateVector a = lie_A(model, x, heading);
  return {da * eval_Q(model, x, heading) - jacobian_Q(model, x, heading) * a,
          da * eval_P(model, x) - jacobian_P(model, x) * a};
}

StateVector dA_dchi(const FlightModel& model, const StateVector& x, double heading,
                    const PmpOptions& options) {
  const double h = options.fd_step * std::max(1.0, std::abs(heading));
  return (lie_A(model, x, heading + h) - lie_A(model, x, heading - h)) / (2.0 * h);
}

SingularContext singular_context(const FlightModel& model, const StateVector& x, double heading,
                                 double alpha, const PmpOptions& options) {
  SingularContext ctx;
  ctx.Q = eval_Q(model, x, heading);
  ctx.P = eval_P(model, x);
  ctx.A = jacobian_P(model, x) * ctx.Q - jacobian_Q(model, x, heading) * ctx.P;
  const Eigen::Matrix4d da = lie_A_jacobian(model, x, heading, options);
  ctx.B = da * ctx.Q - jacobian_Q(model, x, heading) * ctx.A;
  ctx.D = da * ctx.P - jacobian_P(model, x) * ctx.A;
  ctx.dA_dchi = dA_dchi(model, x, heading, options);
  ctx.matrix = assemble_matrix(ctx.P, ctx.A, ctx.Q, heading, options.scaling);
  ctx.rhs << 0.0, 0.0, -alpha, 0.0;
  ctx.alpha = alpha;
  return ctx;
}

Eigen::Matrix4d singular_matrix(const FlightModel& model, const StateVector& x, double heading,
                                const PmpOptions& options) {
  return assemble_matrix(eval_P(model, x), lie_A(model, x, heading), eval_Q(model, x, heading),
                         heading, options.scaling);
}

double singular_det(const FlightModel& model, const StateVector& x, double heading,
                    const PmpOptions& options) {
  return singular_matrix(model, x, heading, options).determinant();
}

double normalized_singular_det(const Eigen::Matrix4d& matrix) {
  const Eigen::Vector4d n = row_norms(matrix);
  return (n.cwiseInverse().asDiagonal() * matrix).determinant();
}

CostateVector solve_costates_on_singular(const SingularContext& ctx, const PmpOptions& options) {
  if (!(ctx.alpha > 0.0)) {
    throw DomainError("solve_costates_on_singular: requires alpha > 0");
  }
  const Eigen::Vector4d norms = row_norms(ctx.matrix);
  const Eigen::Matrix4d m = norms.cwiseInverse().asDiagonal() * ctx.matrix;
  const Eigen::Vector4d r = ctx.rhs.cwiseQuotient(norms);
  const double det = m.determinant();
  if (!std::isfinite(det) || std::abs(det) <= options.eps_det) {
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(m);
    const auto& sv = svd.singularValues();
    const double cond = sv[3] > 0.0 ? sv[0] / sv[3] : std::numeric_limits<double>::infinity();
    std::ostringstream msg;
    msg << "singular co-state system is ill-conditioned: det=" << det << " cond=" << cond;
    throw IllConditionedError(msg.str(), det, cond);
  }
  const Eigen::Vector4d scaled = m.partialPivLu().solve(r);
  const Eigen::Vector4d residual = m * scaled - r;
  const double tol = options.residual_tol * std::max(1.0, scaled.cwiseAbs().maxCoeff());
  if (!scaled.allFinite() || residual.cwiseAbs().maxCoeff() > tol) {
    std::ostringstream msg;
    msg << "singular co-state solve residual " << residual.cwiseAbs().maxCoeff()
        << " exceeds tolerance";
    throw IllConditionedError(msg.str(), det, std::numeric_limits<double>::infinity());
  }
  return options.scaling.to_physical(scaled);
}

CostateVector solve_costates_on_singular(const FlightModel& model, const StateVector& x,
                                         double heading, double alpha,
                                         const PmpOptions& options) {
  SingularContext ctx;
  ctx.Q = eval_Q(model, x, heading);
  ctx.P = eval_P(model, x);
  ctx.A = lie_A(model, x, heading);
  ctx.matrix = assemble_matrix(ctx.P, ctx.A, ctx.Q, heading, options.scaling);
  ctx.rhs << 0.0, 0.0, -alpha, 0.0;
  ctx.alpha = alpha;
  return solve_costates_on_singular(ctx, options);
}

SingularFeedback singular_throttle(const FlightModel& model, const StateVector& x, double heading,
                                   double heading_rate, double alpha, const PmpOptions& options) {
  const SingularContext ctx = singular_context(model, x, heading, alpha, options);
  SingularFeedback out;
  out.costate = solve_costates_on_singular(ctx, options);
  out.det = normalized_singular_det(ctx.matrix);
  const double st2 = options.scaling.time * options.scaling.time;
  const double den = out.costate.dot(ctx.D);
  const double den_scaled = st2 * den;
  out.legendre_clebsch = -den_scaled;
  if (!std::isfinite(den_scaled) || std::abs(den_scaled) <= options.eps_den) {
    std::ostringstream msg;
    msg << "singular throttle denominator <lambda, D> = " << den_scaled << " (scaled)";
    throw SingularDenominatorError(msg.str(), den_scaled);
  }
  const double num = out.costate.dot(ctx.B) + out.costate.dot(ctx.dA_dchi) * heading_rate;
  out.throttle = -num / den;
  return out;
}

double singular_throttle_alpha0(const FlightModel& model, const StateVector& x, double heading,
                                double heading_rate, const PmpOptions& options) {
  StateVector grad;
  for (int i = 0; i < 4; ++i) {
    const double h = fd_step_for(x, i, options);
    StateVector xp = x;
    StateVector xm = x;
    xp[i] += h;
    xm[i] -= h;
    grad[i] = (singular_det(model, xp, heading, options) -
               singular_det(model, xm, heading, options)) /
              (2.0 * h);
  }
  const double hc = options.fd_step * std::max(1.0, std::abs(heading));
  const double ddet_dchi = (singular_det(model, x, heading + hc, options) -
                            singular_det(model, x, heading - hc, options)) /
                           (2.0 * hc);
  const double den = grad.dot(eval_P(model, x));
  const double den_scaled = options.scaling.time * den;
  if (!std::isfinite(den_scaled) || std::abs(den_scaled) <= options.eps_den) {
    std::ostringstream msg;
    msg << "determinant-transport throttle denominator " << den_scaled << " (scaled)";
    throw DegenerateArcError(msg.str());
  }
  return -(grad.dot(eval_Q(model, x, heading)) + ddet_dchi * heading_rate) / den;
}

double legendre_clebsch(const FlightModel& model, const StateVector& x, double heading,
                        const CostateVector& lambda, const PmpOptions& options) {
  const LieBD bd = lie_B_D(model, x, heading, options);
  return -options.scaling.time * options.scaling.time * lambda.dot(bd.D);
}

}  // namespace cruiseopt
