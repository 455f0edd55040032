#include "cruiseopt/direct_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cruiseopt/errors.hpp"

namespace cruiseopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTimeScale = 1e3;
constexpr double kCostScale = 1e4;
const Eigen::Vector4d kResidualScale(1e6, 1e6, 1e2, 1.0);

void check_state(const StateVector& x, double t) {
  if (!x.allFinite()) throw IntegrationError("non-finite state", t);
  if (!(x[kV] > 0.0)) throw IntegrationError("airspeed dropped to zero", t);
  if (!(x[kM] > 0.0)) throw IntegrationError("mass dropped to zero", t);
}

}  // namespace

Eigen::VectorXd pack_decision(const DirectGrid& g) {
  const int n = g.nodes();
  Eigen::VectorXd z(2 * n + 1);
  z.head(n) = g.heading;
  z.segment(n, n) = g.throttle;
  z[2 * n] = g.tf / kTimeScale;
  return z;
}

DirectGrid unpack_decision(const Eigen::VectorXd& z, int n) {
  DirectGrid g;
  g.heading = z.head(n);
  g.throttle = z.segment(n, n);
  g.tf = z[2 * n] * kTimeScale;
  return g;
}

namespace {

struct Rollout {
  std::vector<StateVector> x;
  StateVector end() const { return x.back(); }
};

Rollout roll(const DirectGrid& g, const Scenario& sc, const FlightModel& model) {
  const int n = g.nodes();
  const double h = g.tf / n;
  Rollout r;
  r.x.resize(n + 1);
  r.x[0] = sc.initial_state();
  for (int k = 0; k < n; ++k) {
    try {
      r.x[k + 1] = r.x[k] + h * eval_F(model, r.x[k], {g.heading[k], g.throttle[k]});
    } catch (const DomainError& e) {
      throw IntegrationError(e.what(), k * h);
    }
    check_state(r.x[k + 1], (k + 1) * h);
  }
  return r;
}

ConstrainedValue constrained(const DirectGrid& g, const StateVector& xf, const Scenario& sc) {
  return {objective(sc.alpha, g.tf, xf[kM]) / kCostScale, scaled_terminal_residual(sc, xf)};
}

}  // namespace

double direct_merit(const Eigen::VectorXd& z, const AugLagState& st, const Scenario& sc,
                    const FlightModel& model, Eigen::VectorXd* grad) {
  const int n = static_cast<int>(z.size() - 1) / 2;
  const DirectGrid g = unpack_decision(z, n);
  if (!(g.tf > 0.0)) return kInf;
  Rollout r;
  try {
    r = roll(g, sc, model);
  } catch (const Error&) {
    return kInf;
  }
  const ConstrainedValue v = constrained(g, r.end(), sc);
  const double merit = st.merit(v);
  if (!grad) return merit;

  const double h = g.tf / n;
  const Eigen::Vector3d w = st.mu + st.rho * v.c;
  StateVector p;
  p << w[0] / kResidualScale[0], w[1] / kResidualScale[1], w[2] / kResidualScale[2],
      (sc.alpha - 1.0) / kCostScale;
  double d_tf = sc.alpha / kCostScale;
  grad->resize(z.size());
  for (int k = n - 1; k >= 0; --k) {
    const StateVector& x = r.x[k];
    const double chi = g.heading[k], pi = g.throttle[k];
    const StateVector P = eval_P(model, x);
    const StateVector F = eval_Q(model, x, chi) + pi * P;
    (*grad)[k] = h * p.dot(dQ_dchi(x, chi));
    (*grad)[n + k] = h * p.dot(P);
    d_tf += p.dot(F) / n;
    const Eigen::Matrix4d A = jacobian_Q(model, x, chi) + pi * jacobian_P(model, x);
    p += h * A.transpose() * p;
  }
  (*grad)[2 * n] = d_tf * kTimeScale;
  return merit;
}

void DirectGrid::validate(const Scenario& sc) const {
  if (nodes() < 2) throw DomainError("direct grid needs at least 2 nodes");
  if (throttle.size() != heading.size()) throw DomainError("heading/throttle size mismatch");
  if (!(tf > 0.0)) throw DomainError("tf must be > 0");
  for (int k = 0; k < nodes(); ++k) {
    if (!(throttle[k] >= sc.pi_min && throttle[k] <= sc.pi_max)) {
      throw DomainError("throttle outside [pi_min, pi_max] at node " + std::to_string(k));
    }
  }
}

DirectGrid cold_start(const Scenario& sc, int nodes) {
  if (nodes < 2) throw DomainError("direct grid needs at least 2 nodes");
  const FlightModel model = make_flight_model(sc);
  const double trim = model.drag(sc.m0, sc.v0).value / model.thrust();
  DirectGrid g;
  g.heading = Eigen::VectorXd::Constant(nodes, std::atan2(sc.yf - sc.y0, sc.xf - sc.x0));
  g.throttle = Eigen::VectorXd::Constant(nodes, std::clamp(trim, sc.pi_min, sc.pi_max));
  g.tf = sc.great_circle_distance() / sc.v0;
  return g;
}

DirectGrid grid_from_trajectory(const Trajectory& traj, const Scenario& sc, int nodes) {
  if (nodes < 2) throw DomainError("direct grid needs at least 2 nodes");
  if (traj.samples.empty()) throw DomainError("empty trajectory");
  DirectGrid g;
  g.tf = traj.back().t;
  g.heading.resize(nodes);
  g.throttle.resize(nodes);
  const auto& smp = traj.samples;
  for (int k = 0; k < nodes; ++k) {
    const double t = g.tf * k / nodes;
    auto it = std::upper_bound(smp.begin(), smp.end(), t,
                               [](double v, const Sample& s) { return v < s.t; });
    const Sample& s = it == smp.begin() ? smp.front() : *std::prev(it);
    g.heading[k] = s.heading;
    g.throttle[k] = std::clamp(s.throttle, sc.pi_min, sc.pi_max);
  }
  return g;
}

StateVector euler_terminal(const DirectGrid& grid, const Scenario& sc, const FlightModel& model) {
  grid.validate(sc);
  return roll(grid, sc, model).end();
}

Trajectory euler_rollout(const DirectGrid& grid, const Scenario& sc, const FlightModel& model) {
  grid.validate(sc);
  const Rollout r = roll(grid, sc, model);
  const int n = grid.nodes();
  Trajectory traj;
  traj.schedule.tf = grid.tf;
  traj.samples.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    Sample& s = traj.samples[k];
    const int u = std::min(k, n - 1);
    s.t = grid.tf * k / n;
    s.x = r.x[k];
    s.heading = grid.heading[u];
    s.throttle = grid.throttle[u];
    s.arc = -1;
    const auto env = model.envelope(s.x[kV]);
    s.mach = env.mach;
    s.cas = env.cas;
    s.mach_ok = env.mach_ok();
    s.cas_ok = env.cas_ok();
  }
  return traj;
}

Solution solve_direct(const Scenario& sc, const DirectOptions& opt) {
  sc.validate();
  const FlightModel model = make_flight_model(sc);
  const int n = opt.nodes;
  DirectGrid start = opt.warm_start ? *opt.warm_start : cold_start(sc, n);
  if (start.nodes() != n) throw DomainError("warm start has the wrong node count");
  start.validate(sc);

  Eigen::VectorXd lo(2 * n + 1), hi(2 * n + 1);
  lo.head(n).setConstant(-kInf);
  hi.head(n).setConstant(kInf);
  lo.segment(n, n).setConstant(sc.pi_min);
  hi.segment(n, n).setConstant(sc.pi_max);
  lo[2 * n] = 1e-3;
  hi[2 * n] = kInf;

  const auto eval = [&](const Eigen::VectorXd& z) -> ConstrainedValue {
    try {
      const DirectGrid g = unpack_decision(z, n);
      return constrained(g, roll(g, sc, model).end(), sc);
    } catch (const Error&) {
      return {kInf, Eigen::VectorXd::Constant(3, kInf)};
    }
  };
  const auto inner = [&](const AugLagState& st, const Eigen::VectorXd& z0) {
    const ValueGrad f = [&](const Eigen::VectorXd& z, Eigen::VectorXd* g) {
      return direct_merit(z, st, sc, model, g);
    };
    return spg(f, z0, lo, hi, opt.inner);
  };
  const AugLagResult al = augmented_lagrangian(eval, pack_decision(start), 3, inner, opt.outer);

  Solution sol;
  sol.method = "direct";
  sol.scenario = sc;
  sol.iterations = al.outer_iterations;
  sol.evaluations = al.inner_evals;
  sol.restarts = 1;
  sol.best_start = 0;

  StartReport rep;
  rep.initial.tf = start.tf;
  rep.evaluations = al.inner_evals;
  const DirectGrid best = unpack_decision(al.x, n);
  rep.result.tf = best.tf;
  try {
    sol.trajectory = euler_rollout(best, sc, model);
    const StateVector& xf = sol.trajectory.back().x;
    sol.cost = objective(sc.alpha, best.tf, xf[kM]);
    sol.terminal_residual = terminal_residual(sc, xf);
    sol.violation = scaled_terminal_residual(sc, xf).cwiseAbs().maxCoeff();
    sol.converged = sol.violation <= opt.outer.feas_tol;
  } catch (const Error& e) {
    rep.error = e.what();
    sol.converged = false;
  }
  rep.cost = sol.cost;
  rep.violation = sol.violation;
  rep.feasible = sol.converged;
  sol.starts.push_back(rep);
  sol.verification = verify_solution(sol);
  return sol;
}

}  // namespace cruiseopt
