#include "cruiseopt/arc_integrator.hpp"

#include <array>
#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "cruiseopt/errors.hpp"

namespace cruiseopt {

namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;

// Right-hand sides of the three-arc system. The throttle of the most recent
// evaluation is kept so callers can record the control at step starts
// without a second feedback evaluation.
class ArcSystem {
 public:
  ArcSystem(const FlightModel& model, const Scenario& scenario, const IntegratorOptions& options)
      : model_(model), scenario_(scenario), options_(options) {}

  double throttle(int arc, const StateVector& x, double heading) {
    if (arc == 0) return last_throttle_ = scenario_.pi_max;
    if (arc == 2) return last_throttle_ = scenario_.pi_min;
    double pi = singular_control(model_, x, heading, scenario_.alpha, options_);
    if (pi < scenario_.pi_min || pi > scenario_.pi_max) {
      ++clamps_;
      pi = std::clamp(pi, scenario_.pi_min, scenario_.pi_max);
    }
    return last_throttle_ = pi;
  }

  Vec5 state_rhs(int arc, const Vec5& s) {
    const StateVector x = s.head<4>();
    const double chi = s[4];
    Vec5 d;
    d.head<4>() = eval_F(model_, x, {chi, throttle(arc, x, chi)});
    d[4] = heading_rate(model_, x, chi);
    return d;
  }

  void check(const StateVector& x, double t) const {
    if (!x.allFinite()) throw IntegrationError("non-finite state", t);
    if (!(x[kV] > 0.0)) throw IntegrationError("airspeed dropped to zero", t);
    if (!(x[kM] > scenario_.aircraft.m_min)) throw IntegrationError("mass below m_min", t);
  }

  double last_throttle() const { return last_throttle_; }
  int clamps() const { return clamps_; }

 private:
  const FlightModel& model_;
  const Scenario& scenario_;
  const IntegratorOptions& options_;
  double last_throttle_ = 0.0;
  int clamps_ = 0;
};

template <class V, class F>
V rk4_step(F&& f, const V& y, double h, double* first_throttle, const ArcSystem& sys) {
  const V k1 = f(y);
  if (first_throttle) *first_throttle = sys.last_throttle();
  const V k2 = f(y + 0.5 * h * k1);
  const V k3 = f(y + 0.5 * h * k2);
  const V k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_law(const Scenario& scenario, const IntegratorOptions& options) {
  if (options.steps_per_arc < 1) throw DomainError("steps_per_arc must be >= 1");
  if (options.law == SingularLaw::kCostateFeedback && !(scenario.alpha > 0.0)) {
    throw DomainError("alpha = 0 requires the determinant-transport singular law");
  }
}

// Integrates all non-empty arcs. When `samples` is non-null every step end is
// recorded with the throttle applied at the start of the following step.
Vec5 run_arcs(const ArcSchedule& schedule, const Scenario& scenario, ArcSystem& sys, int steps,
              std::vector<Sample>* samples) {
  Vec5 y;
  y.head<4>() = scenario.initial_state();
  y[4] = schedule.chi0;
  const double bounds[4] = {0.0, schedule.t1, schedule.t2, schedule.tf};
  bool started = false;
  double t = 0.0;
  for (int arc = 0; arc < 3; ++arc) {
    const double duration = bounds[arc + 1] - bounds[arc];
    if (!(duration > 0.0)) continue;
    const double h = duration / steps;
    if (samples) {
      if (!started) {
        Sample s;
        s.t = 0.0;
        s.x = y.head<4>();
        s.heading = y[4];
        s.arc = arc;
        samples->push_back(s);
      } else {
        samples->back().arc = arc;
      }
    }
    started = true;
    for (int k = 0; k < steps; ++k) {
      double pi_start = 0.0;
      try {
        y = rk4_step([&](const Vec5& s) { return sys.state_rhs(arc, s); }, y, h, &pi_start, sys);
      } catch (FeedbackError& e) {
        e.set_time(t);
        throw;
      } catch (const DomainError& e) {
        // A stage point left the model domain (v <= 0 inside the step).
        throw IntegrationError(e.what(), t);
      }
      t = (k + 1 == steps) ? bounds[arc + 1] : bounds[arc] + (k + 1) * h;
      sys.check(y.head<4>(), t);
      if (samples) {
        samples->back().throttle = pi_start;
        Sample s;
        s.t = t;
        s.x = y.head<4>();
        s.heading = y[4];
        s.arc = arc;
        samples->push_back(s);
      }
    }
  }
  if (samples && !samples->empty()) {
    auto& last = samples->back();
    try {
      last.throttle = sys.throttle(last.arc, last.x, last.heading);
    } catch (FeedbackError& e) {
      e.set_time(last.t);
      throw;
    }
  }
  return y;
}

Vec5 augmented(const Sample& s) {
  Vec5 y;
  y.head<4>() = s.x;
  y[4] = s.heading;
  return y;
}

// One RK4 step of the co-state equation from sample a to sample b (either
// direction). The state is not re-integrated: stage states come from the
// cubic Hermite interpolant of the stored samples, which keeps fourth order
// and avoids integrating the state against its stable direction.
CostateVector costate_step(ArcSystem& sys, const FlightModel& model, int arc, const Sample& a,
                           const Sample& b, const CostateVector& lambda) {
  const double h = b.t - a.t;
  const Vec5 ya = augmented(a);
  const Vec5 yb = augmented(b);
  const Vec5 fa = sys.state_rhs(arc, ya);
  const Vec5 fb = sys.state_rhs(arc, yb);
  const Vec5 ym = 0.5 * (ya + yb) + (h / 8.0) * (fa - fb);
  const auto g = [&](const Vec5& y, const CostateVector& l) {
    const StateVector x = y.head<4>();
    return CostateVector(costate_rhs(model, x, l, {y[4], sys.throttle(arc, x, y[4])}));
  };
  const CostateVector k1 = g(ya, lambda);
  const CostateVector k2 = g(ym, lambda + 0.5 * h * k1);
  const CostateVector k3 = g(ym, lambda + 0.5 * h * k2);
  const CostateVector k4 = g(yb, lambda + h * k3);
  return lambda + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Indices of the samples carrying each arc label, in order.
std::array<std::vector<int>, 3> arc_indices(const Trajectory& traj) {
  std::array<std::vector<int>, 3> idx;
  for (int i = 0; i < static_cast<int>(traj.samples.size()); ++i) {
    idx[traj.samples[i].arc].push_back(i);
  }
  return idx;
}

double rel_diff(const CostateVector& a, const CostateVector& b, const Scaling& sc) {
  const CostateVector as = sc.to_scaled(a);
  const CostateVector bs = sc.to_scaled(b);
  return (as - bs).cwiseAbs().maxCoeff() / std::max(bs.cwiseAbs().maxCoeff(), 1e-300);
}


void finish_costates(const FlightModel& model, const IntegratorOptions& options, Trajectory* traj) {
  for (auto& s : traj->samples) {
    const Controls u{s.heading, s.throttle};
    s.switching = switching_function(model, s.x, s.costate);
    s.hamiltonian = hamiltonian(model, s.x, s.costate, u);
    s.legendre_clebsch = legendre_clebsch(model, s.x, s.heading, s.costate, options.pmp);
  }
  traj->has_costates = true;
}

// Pi_max then Pi_min with no singular arc. The co-state equation is linear,
// so lambda = L_m + rho L_r + nu L_v with each term propagated backward from
// tf: L_m(tf) = (0, 0, 0, alpha - 1), L_r(tf) along the final heading,
// L_v(tf) = e_v. rho and nu follow from H(tf) = -alpha and S(ts) = 0.
bool bang_bang_costates(ArcSystem& sys, const FlightModel& model, const Scenario& scenario,
                        const std::array<std::vector<int>, 3>& idx, std::vector<Sample>* smp) {
  if (idx[0].empty() || idx[2].size() < 2) return false;
  auto& s = *smp;
  const int n = static_cast<int>(s.size());
  const Sample& last = s.back();
  std::array<CostateVector, 3> end;
  end[0] << 0.0, 0.0, 0.0, scenario.alpha - 1.0;
  end[1] << std::cos(last.heading), std::sin(last.heading), 0.0, 0.0;
  end[2] << 0.0, 0.0, 1.0, 0.0;

  std::array<std::vector<CostateVector>, 3> basis;
  for (int b = 0; b < 3; ++b) {
    auto& l = basis[b];
    l.resize(n);
    l[n - 1] = end[b];
    for (int i = n - 2; i >= 0; --i) {
      l[i] = costate_step(sys, model, s[i].arc == 0 ? 0 : 2, s[i + 1], s[i], l[i + 1]);
    }
  }

  // H and S are affine in lambda; subtract the value at lambda = 0.
  const int js = idx[2].front();
  const Controls uf{last.heading, last.throttle};
  const CostateVector zero = CostateVector::Zero();
  const double h0 = hamiltonian(model, last.x, zero, uf);
  const double s0 = switching_function(model, s[js].x, zero);
  Eigen::Matrix2d a;
  Eigen::Vector2d r;
  for (int b = 1; b < 3; ++b) {
    a(0, b - 1) = hamiltonian(model, last.x, basis[b][n - 1], uf) - h0;
    a(1, b - 1) = switching_function(model, s[js].x, basis[b][js]) - s0;
  }
  r[0] = -scenario.alpha - hamiltonian(model, last.x, basis[0][n - 1], uf);
  r[1] = -switching_function(model, s[js].x, basis[0][js]);
  if (!(std::abs(a.determinant()) > 0.0)) return false;
  const Eigen::Vector2d coef = a.partialPivLu().solve(r);
  if (!coef.allFinite()) return false;
  for (int i = 0; i < n; ++i) {
    s[i].costate = basis[0][i] + coef[0] * basis[1][i] + coef[1] * basis[2][i];
  }
  return true;
}
}  // namespace

void ArcSchedule::validate() const {
  if (!(std::isfinite(t1) && std::isfinite(t2) && std::isfinite(tf) && std::isfinite(chi0))) {
    throw DomainError("arc schedule contains non-finite values");
  }
  if (!(0.0 <= t1 && t1 <= t2 && t2 <= tf && tf > 0.0)) {
    throw DomainError("arc schedule must satisfy 0 <= t1 <= t2 <= tf, tf > 0");
  }
}

double singular_control(const FlightModel& model, const StateVector& x, double heading,
                        double alpha, const IntegratorOptions& options) {
  const double rate = heading_rate(model, x, heading);
  if (options.law == SingularLaw::kDeterminantTransport) {
    return singular_throttle_alpha0(model, x, heading, rate, options.pmp);
  }
  return singular_throttle(model, x, heading, rate, alpha, options.pmp).throttle;
}

Trajectory integrate_arcs(const ArcSchedule& schedule, const Scenario& scenario,
                          const FlightModel& model, const IntegratorOptions& options) {
  schedule.validate();
  check_law(scenario, options);
  ArcSystem sys(model, scenario, options);
  Trajectory traj;
  traj.schedule = schedule;
  traj.samples.reserve(3 * options.steps_per_arc + 1);
  run_arcs(schedule, scenario, sys, options.steps_per_arc, &traj.samples);
  traj.clamp_count = sys.clamps();
  for (auto& s : traj.samples) {
    const auto env = model.envelope(s.x[kV]);
    s.mach = env.mach;
    s.cas = env.cas;
    s.mach_ok = env.mach_ok();
    s.cas_ok = env.cas_ok();
  }
  return traj;
}

AugmentedState propagate_terminal(const ArcSchedule& schedule, const Scenario& scenario,
                                  const FlightModel& model, const IntegratorOptions& options,
                                  int* clamp_count) {
  schedule.validate();
  check_law(scenario, options);
  ArcSystem sys(model, scenario, options);
  const Vec5 y = run_arcs(schedule, scenario, sys, options.steps_per_arc, nullptr);
  if (clamp_count) *clamp_count = sys.clamps();
  return {y.head<4>(), y[4]};
}

Trajectory reconstruct_costates(const Trajectory& trajectory, const Scenario& scenario,
                                const FlightModel& model, const IntegratorOptions& options) {
  Trajectory out = trajectory;
  const auto& sch = trajectory.schedule;
  for (auto& s : out.samples) {
    s.det = normalized_singular_det(singular_matrix(model, s.x, s.heading, options.pmp));
  }
  auto idx = arc_indices(out);
  auto& smp = out.samples;
  ArcSystem sys(model, scenario, options);
  if (sch.t1 == sch.t2) {
    if (!bang_bang_costates(sys, model, scenario, idx, &smp)) {
      out.has_costates = false;
      return out;
    }
    finish_costates(model, options, &out);
    return out;
  }
  if (!(scenario.alpha > 0.0) || options.law != SingularLaw::kCostateFeedback) {
    out.has_costates = false;
    return out;
  }
  const auto solve = [&](const Sample& s) {
    try {
      return solve_costates_on_singular(model, s.x, s.heading, scenario.alpha, options.pmp);
    } catch (FeedbackError& e) {
      e.set_time(s.t);
      throw;
    }
  };

  // Singular arc, including the exit junction when the last arc is non-empty.
  for (int i : idx[1]) smp[i].costate = solve(smp[i]);
  const int exit = idx[2].empty() ? -1 : idx[2].front();
  if (exit >= 0) smp[exit].costate = solve(smp[exit]);

  if (!idx[0].empty()) {
    // Backward from the entry junction over the first arc.
    int next = idx[1].front();
    for (int k = static_cast<int>(idx[0].size()) - 1; k >= 0; --k) {
      const int i = idx[0][k];
      smp[i].costate = costate_step(sys, model, 0, smp[next], smp[i], smp[next].costate);
      next = i;
    }
  }
  if (exit >= 0) {
    for (std::size_t k = 1; k < idx[2].size(); ++k) {
      const int i = idx[2][k];
      const int prev = idx[2][k - 1];
      smp[i].costate = costate_step(sys, model, 2, smp[prev], smp[i], smp[prev].costate);
    }
  }

  finish_costates(model, options, &out);
  return out;
}

SingularArcConsistency singular_arc_consistency(const Trajectory& trajectory,
                                                const Scenario& scenario,
                                                const FlightModel& model,
                                                const IntegratorOptions& options) {
  SingularArcConsistency out;
  if (!trajectory.has_costates) return out;
  const auto idx = arc_indices(trajectory);
  const auto& smp = trajectory.samples;
  if (idx[1].size() < 2) return out;

  // Singular-arc nodes: [t1, ..., t2].
  std::vector<int> nodes = idx[1];
  if (!idx[2].empty()) nodes.push_back(idx[2].front());
  const int n = static_cast<int>(nodes.size()) - 1;
  const auto& sch = trajectory.schedule;
  const double h = (sch.t2 - sch.t1) / options.steps_per_arc;
  const Scaling& sc = options.pmp.scaling;

  ArcSystem sys(model, scenario, options);
  std::vector<CostateVector> fwd(n + 1);
  fwd[0] = smp[nodes[0]].costate;
  for (int k = 1; k <= n; ++k) {
    fwd[k] = costate_step(sys, model, 1, smp[nodes[k - 1]], smp[nodes[k]], fwd[k - 1]);
  }
  std::vector<CostateVector> bwd(n + 1);
  bwd[n] = smp[nodes[n]].costate;
  for (int k = n - 1; k >= 0; --k) {
    bwd[k] = costate_step(sys, model, 1, smp[nodes[k + 1]], smp[nodes[k]], bwd[k + 1]);
  }

  out.forward_max_rel = 0.0;
  out.forward_step_max_rel = 0.0;
  out.backward_max_rel = 0.0;
  out.max_abs_s2 = 0.0;
  std::vector<double> s(n + 1);
  for (int k = 0; k <= n; ++k) s[k] = switching_function(model, smp[nodes[k]].x, bwd[k]);
  const double hs = h / sc.time;
  for (int k = 1; k < n; ++k) {
    const CostateVector& alg = smp[nodes[k]].costate;
    const CostateVector step =
        costate_step(sys, model, 1, smp[nodes[k - 1]], smp[nodes[k]], smp[nodes[k - 1]].costate);
    out.forward_max_rel = std::max(out.forward_max_rel, rel_diff(fwd[k], alg, sc));
    out.forward_step_max_rel = std::max(out.forward_step_max_rel, rel_diff(step, alg, sc));
    out.backward_max_rel = std::max(out.backward_max_rel, rel_diff(bwd[k], alg, sc));
    out.max_abs_s2 =
        std::max(out.max_abs_s2, std::abs((s[k + 1] - 2.0 * s[k] + s[k - 1]) / (hs * hs)));
    ++out.interior_points;
  }
  return out;
}

}  // namespace cruiseopt
