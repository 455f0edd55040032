#include "cruiseopt/switching_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <thread>

#include <Eigen/QR>

#include "cruiseopt/errors.hpp"

namespace cruiseopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTimeScale = 1e3;
constexpr double kCostScale = 1e4;
constexpr double kFailedMerit = 1e20;

ConstrainedValue failed_value() {
  return {kInf, Eigen::VectorXd::Constant(3, kInf)};
}

// Schedule <-> simplex coordinates. The simplex works on
// (chi0, tf / 1e3, a, b) with t1 = a tf and t2 = t1 + b (tf - t1); chi0 is
// dropped for a constant wind.
class Parameterization {
 public:
  explicit Parameterization(const Scenario& scenario)
      : scenario_(scenario), constant_(is_constant(scenario.wind)) {}

  int size() const { return constant_ ? 3 : 4; }

  Eigen::VectorXd encode(const ArcSchedule& s) const {
    const double a = s.t1 / s.tf;
    const double b = s.tf > s.t1 ? (s.t2 - s.t1) / (s.tf - s.t1) : 0.0;
    if (constant_) return Eigen::Vector3d(s.tf / kTimeScale, a, b);
    return Eigen::Vector4d(s.chi0, s.tf / kTimeScale, a, b);
  }

  // Returns false when the point has no admissible schedule.
  bool decode(const Eigen::VectorXd& u, ArcSchedule* s) const {
    const int o = constant_ ? 0 : 1;
    if (!u.allFinite() || !(u[o] > 0.0)) return false;
    s->tf = u[o] * kTimeScale;
    const double a = std::clamp(u[o + 1], 0.0, 1.0);
    const double b = std::clamp(u[o + 2], 0.0, 1.0);
    s->t1 = a * s->tf;
    s->t2 = std::min(s->t1 + b * (s->tf - s->t1), s->tf);
    s->chi0 = constant_ ? chi0_constant_wind(scenario_, s->tf) : u[0];
    return true;
  }

  Eigen::VectorXd initial_step() const {
    if (constant_) return Eigen::Vector3d(0.2, 0.05, 0.05);
    return Eigen::Vector4d(0.05, 0.2, 0.05, 0.05);
  }

 private:
  const Scenario& scenario_;
  bool constant_;
};

ConstrainedValue safe_evaluate(const ArcSchedule& s, const Scenario& sc, const FlightModel& model,
                               const IntegratorOptions& opt, std::string* error = nullptr) {
  try {
    return evaluate_schedule(s, sc, model, opt);
  } catch (const Error& e) {
    if (error && error->empty()) *error = e.what();
    return failed_value();
  }
}

/**
 * First-order refinement on the feasible manifold. The terminal constraints
 * are solved for the remaining variables w by Gauss-Newton with a
 * central-difference Jacobian; t1 is then moved by a bracketing root search on the
 * reduced gradient dJ/dt1 obtained from the implicit function theorem. When
 * the singular arc has collapsed (t1 = t2) there are no degrees of freedom
 * left and only the constraint solve is performed.
 */
class Polisher {
 public:
  Polisher(const Scenario& sc, const FlightModel& model, const IntegratorOptions& opt)
      : sc_(sc), model_(model), opt_(opt), constant_(is_constant(sc.wind)) {}

  // Refines `s` in place; returns false if no feasible point was reached.
  bool run(ArcSchedule* s, int* evals) {
    evals_ = 0;
    bool ok;
    if (s->t2 - s->t1 < kCollapse) {
      ok = run_bang_bang(s);
    } else {
      ok = run_interior(s);
      if (ok && s->t2 - s->t1 < kNearCollapse) {
        // The singular arc shrank toward zero; compare with the bang-bang point.
        ArcSchedule bb = *s;
        const Point interior = eval(*s);
        if (run_bang_bang(&bb)) {
          const Point alt = eval(bb);
          if (alt.ok && !(interior.f < alt.f)) *s = bb;
        }
      }
    }
    *evals += evals_;
    return ok;
  }

 private:
  static constexpr double kCollapse = 1e-3;  // [s]
  static constexpr double kNearCollapse = 1.0;  // [s]
  static constexpr double kTimeStep = 1e-2;  // FD step on times [s]
  static constexpr double kHeadingStep = 1e-5;
  static constexpr double kGradientFloor = 5e-13;  // scaled cost per second

  struct Point {
    double f = kInf;
    Eigen::Vector3d c = Eigen::Vector3d::Constant(kInf);
    bool ok = false;
  };

  // Free variables: interior  w = ([chi0], t2, tf), parameter p = t1;
  //                 bang-bang w = ([chi0], t12, tf).
  int nw() const { return constant_ ? 2 : 3; }

  ArcSchedule make(bool bang_bang, double p, const Eigen::VectorXd& w) const {
    ArcSchedule s;
    const int o = constant_ ? 0 : 1;
    s.tf = w[o + 1];
    if (bang_bang) {
      s.t1 = s.t2 = w[o];
    } else {
      s.t1 = p;
      s.t2 = w[o];
    }
    if (constant_) {
      s.chi0 = std::isfinite(s.tf) ? chi0_constant_wind(sc_, s.tf) : 0.0;
    } else {
      s.chi0 = w[0];
    }
    return s;
  }

  Eigen::VectorXd unmake(bool bang_bang, const ArcSchedule& s) const {
    Eigen::VectorXd w(nw());
    const int o = constant_ ? 0 : 1;
    if (!constant_) w[0] = s.chi0;
    w[o] = bang_bang ? 0.5 * (s.t1 + s.t2) : s.t2;
    w[o + 1] = s.tf;
    return w;
  }

  Eigen::VectorXd steps() const {
    Eigen::VectorXd h = Eigen::VectorXd::Constant(nw(), kTimeStep);
    if (!constant_) h[0] = kHeadingStep;
    return h;
  }

  Point eval(const ArcSchedule& s) {
    ++evals_;
    Point pt;
    try {
      const ConstrainedValue v = evaluate_schedule(s, sc_, model_, opt_);
      pt.f = v.f;
      pt.c = v.c;
      pt.ok = std::isfinite(v.f) && v.c.allFinite();
    } catch (const Error&) {
      pt.ok = false;
    }
    return pt;
  }

  // Central-difference Jacobian of c with respect to w; false on failure.
  bool jacobian_w(bool bb, double p, const Eigen::VectorXd& w, Eigen::MatrixXd* jc,
                  Eigen::RowVectorXd* jf) {
    const Eigen::VectorXd h = steps();
    jc->resize(3, nw());
    jf->resize(nw());
    for (int i = 0; i < nw(); ++i) {
      Eigen::VectorXd wp = w, wm = w;
      wp[i] += h[i];
      wm[i] -= h[i];
      const Point a = eval(make(bb, p, wp));
      const Point b = eval(make(bb, p, wm));
      if (!a.ok || !b.ok) return false;
      jc->col(i) = (a.c - b.c) / (2.0 * h[i]);
      (*jf)[i] = (a.f - b.f) / (2.0 * h[i]);
    }
    return true;
  }

  // Gauss-Newton on c(p, w) = 0 over w; least squares when the system is
  // rank deficient (constant wind: the x/y residuals are collinear).
  bool solve_w(bool bb, double p, Eigen::VectorXd* w, Point* at) {
    Point cur = eval(make(bb, p, *w));
    if (!cur.ok) return false;
    for (int it = 0; it < 25; ++it) {
      if (cur.c.cwiseAbs().maxCoeff() <= 1e-12) break;
      Eigen::MatrixXd jc;
      Eigen::RowVectorXd jf;
      if (!jacobian_w(bb, p, *w, &jc, &jf)) return false;
      const Eigen::VectorXd dw = jc.colPivHouseholderQr().solve(-cur.c);
      if (!dw.allFinite()) return false;
      double lam = 1.0;
      bool improved = false;
      for (int ls = 0; ls < 30; ++ls, lam *= 0.5) {
        const Eigen::VectorXd wn = *w + lam * dw;
        const ArcSchedule sn = make(bb, p, wn);
        if (!(0.0 <= sn.t1 && sn.t1 <= sn.t2 && sn.t2 <= sn.tf)) continue;
        const Point nxt = eval(sn);
        if (nxt.ok && nxt.c.norm() < cur.c.norm()) {
          *w = wn;
          cur = nxt;
          improved = true;
          break;
        }
      }
      if (!improved) break;
      if ((lam * dw).cwiseAbs().maxCoeff() <= 1e-10) break;
    }
    *at = cur;
    return cur.c.cwiseAbs().maxCoeff() <= 1e-9;
  }

  // dJ/dp along the constraint manifold, at a point where c(p, w) = 0.
  bool reduced_gradient(double p, const Eigen::VectorXd& w, double* g) {
    Eigen::MatrixXd jc;
    Eigen::RowVectorXd jf;
    if (!jacobian_w(false, p, w, &jc, &jf)) return false;
    const Point a = eval(make(false, p + kTimeStep, w));
    const Point b = eval(make(false, p - kTimeStep, w));
    if (!a.ok || !b.ok) return false;
    const Eigen::Vector3d cp = (a.c - b.c) / (2.0 * kTimeStep);
    const double fp = (a.f - b.f) / (2.0 * kTimeStep);
    const Eigen::VectorXd dw = jc.colPivHouseholderQr().solve(cp);
    *g = fp - jf.dot(dw);
    return std::isfinite(*g);
  }

  bool run_bang_bang(ArcSchedule* s) {
    Eigen::VectorXd w = unmake(true, *s);
    Point at;
    if (!solve_w(true, 0.0, &w, &at)) return false;
    *s = make(true, 0.0, w);
    return true;
  }

  struct Node {
    double p = 0.0;
    Eigen::VectorXd w;
    double g = 0.0;
    double f = kInf;
  };

  // Constraint solve plus reduced gradient at p, warm-started from `from`.
  bool probe(double p, const Eigen::VectorXd& from, Node* out) {
    Node n;
    n.p = p;
    n.w = from;
    Point at;
    if (!solve_w(false, p, &n.w, &at)) return false;
    if (!(p <= make(false, p, n.w).t2)) return false;
    n.f = at.f;
    if (!reduced_gradient(p, n.w, &n.g)) return false;
    *out = n;
    return true;
  }

  bool converged(const Node& n) const {
    // Below this the reduced gradient is dominated by integration round-off.
    return std::abs(n.g) <= kGradientFloor * std::max(1.0, std::abs(n.f));
  }

  // Root of the reduced gradient in p = t1: expansion until the sign
  // changes (or p reaches 0), then Illinois-modified regula falsi.
  bool run_interior(ArcSchedule* s) {
    Node cur;
    if (!probe(s->t1, unmake(false, *s), &cur)) return false;
    Node best = cur;
    const auto keep = [&](const Node& n) {
      if (n.f < best.f) best = n;
    };
    std::optional<Node> lo, hi;  // g(lo) < 0 < g(hi)
    (cur.g < 0.0 ? lo : hi) = cur;
    int lo_kept = 0, hi_kept = 0;
    double step = 5.0;
    int failures = 0;
    for (int it = 0; it < 40 && !converged(cur); ++it) {
      double p_try;
      if (lo && hi) {
        if (std::abs(hi->p - lo->p) <= 1e-3) break;
        p_try = (lo->p * hi->g - hi->p * lo->g) / (hi->g - lo->g);
        if (!(p_try > std::min(lo->p, hi->p) && p_try < std::max(lo->p, hi->p))) {
          p_try = 0.5 * (lo->p + hi->p);
        }
      } else if (cur.g > 0.0) {
        if (cur.p <= 1e-3) break;  // minimum on the bound t1 = 0
        p_try = std::max(cur.p - step, cur.p <= 2e-3 ? 0.0 : 0.5 * cur.p);
      } else {
        const double t2 = make(false, cur.p, cur.w).t2;
        p_try = std::min(cur.p + step, cur.p + 0.5 * (t2 - cur.p));
      }
      Node n;
      const Node& seed = (lo && hi) ? (std::abs(lo->p - p_try) < std::abs(hi->p - p_try) ? *lo : *hi)
                                    : cur;
      if (!probe(p_try, seed.w, &n)) {
        if (++failures > 8) break;
        if (lo && hi) {
          // Shrink the bracket toward the side that evaluates.
          (std::abs(lo->p - p_try) < std::abs(hi->p - p_try) ? hi : lo)->p = p_try;
        }
        step *= 0.25;
        continue;
      }
      keep(n);
      if (lo && hi) {
        if (n.g < 0.0) {
          lo = n;
          lo_kept = 0;
          if (++hi_kept >= 2) hi->g *= 0.5;
        } else {
          hi = n;
          hi_kept = 0;
          if (++lo_kept >= 2) lo->g *= 0.5;
        }
      } else {
        (n.g < 0.0 ? lo : hi) = n;
        step *= 2.0;
      }
      cur = n;
    }
    *s = make(false, best.p, best.w);
    return true;
  }

  const Scenario& sc_;
  const FlightModel& model_;
  const IntegratorOptions& opt_;
  bool constant_;
  int evals_ = 0;
};

struct StartOutcome {
  StartReport report;
  int outer_iterations = 0;
};

StartOutcome run_start(int index, const ArcSchedule& initial, const Scenario& sc,
                       const FlightModel& model, const SolverOptions& options,
                       const IntegratorOptions& full) {
  StartOutcome out;
  StartReport& rep = out.report;
  rep.index = index;
  rep.initial = initial;

  IntegratorOptions coarse = full;
  coarse.steps_per_arc = options.explore_steps;
  const Parameterization param(sc);

  // Failed integrations get a finite merit above any admissible value that
  // shrinks with the time survived, so the simplex can walk out of the
  // region where the glide arc stalls.
  double remaining = 0.0;
  const auto eval = [&](const Eigen::VectorXd& u) {
    ArcSchedule s;
    remaining = 2.0;
    if (!param.decode(u, &s)) return failed_value();
    ++rep.evaluations;
    remaining = 1.0;
    try {
      return evaluate_schedule(s, sc, model, coarse);
    } catch (const IntegrationError& e) {
      remaining = (s.tf - e.time()) / s.tf;
    } catch (const FeedbackError& e) {
      remaining = (s.tf - e.time()) / s.tf;
    } catch (const Error&) {
    }
    ++rep.failed_evaluations;
    return failed_value();
  };
  const InnerSolver inner = [&](const AugLagState& st, const Eigen::VectorXd& u0) {
    const auto merit = [&](const Eigen::VectorXd& u) {
      const ConstrainedValue v = eval(u);
      if (std::isfinite(v.f) && v.c.allFinite()) return st.merit(v);
      return kFailedMerit * (1.0 + remaining);
    };
    return nelder_mead(merit, u0, param.initial_step(), options.inner);
  };

  // Grid starts whose final glide stalls are repaired by moving t2 toward tf.
  ArcSchedule current = initial;
  for (int k = 0; k < 40; ++k) {
    std::string ignored;
    if (std::isfinite(safe_evaluate(current, sc, model, coarse, &ignored).f)) break;
    ++rep.evaluations;
    current.t2 = 0.5 * (current.t2 + current.tf);
  }
  rep.initial = current;
  try {
    const AugLagResult al =
        augmented_lagrangian(eval, param.encode(current), 3, inner, options.outer);
    out.outer_iterations = al.outer_iterations;
    ArcSchedule decoded;
    if (param.decode(al.x, &decoded)) current = decoded;
  } catch (const Error&) {
  }

  if (options.polish) {
    ArcSchedule polished = current;
    Polisher pol(sc, model, full);
    if (pol.run(&polished, &rep.evaluations)) current = polished;
  }

  rep.result = current;
  const ConstrainedValue v = safe_evaluate(current, sc, model, full, &rep.error);
  ++rep.evaluations;
  rep.cost = v.f * kCostScale;
  rep.violation = v.c.allFinite() ? v.c.cwiseAbs().maxCoeff() : kInf;
  rep.feasible = std::isfinite(v.f) && rep.violation <= options.outer.feas_tol;
  return out;
}

std::vector<int> shuffled_indices(int n, std::uint64_t seed) {
  // Explicit Fisher-Yates so the order does not depend on the standard
  // library's shuffle implementation.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(idx[i], idx[j]);
  }
  return idx;
}

IntegratorOptions integrator_for(const Scenario& sc, IntegratorOptions opt) {
  opt.law = sc.alpha > 0.0 ? SingularLaw::kCostateFeedback : SingularLaw::kDeterminantTransport;
  return opt;
}

}  // namespace

double chi0_constant_wind(const Scenario& sc, double tf) {
  const auto& w = std::get<ConstantWind>(sc.wind);
  const double num = sc.yf - w.wy * tf - sc.y0;
  const double den = sc.xf - w.wx * tf - sc.x0;
  if (num == 0.0 && den == 0.0) {
    throw GeometryError("heading undefined: wind displacement cancels the route exactly");
  }
  return std::atan2(num, den);
}

std::vector<ArcSchedule> start_grid(const Scenario& sc) {
  std::vector<ArcSchedule> grid;
  const double base_tf = sc.great_circle_distance() / sc.v0;
  const double chi_ref = std::atan2(sc.yf - sc.y0, sc.xf - sc.x0);
  const bool constant = is_constant(sc.wind);
  for (double tf_factor : {0.9, 1.0, 1.1}) {
    for (const auto& [f1, f2] : {std::pair{0.2, 0.8}, std::pair{0.3, 0.7}}) {
      for (double dchi : {-0.2, 0.0, 0.2}) {
        if (constant && dchi != 0.0) continue;
        ArcSchedule s;
        s.tf = tf_factor * base_tf;
        s.t1 = f1 * s.tf;
        s.t2 = f2 * s.tf;
        s.chi0 = constant ? chi0_constant_wind(sc, s.tf) : chi_ref + dchi;
        grid.push_back(s);
      }
    }
  }
  return grid;
}

ConstrainedValue evaluate_schedule(const ArcSchedule& schedule, const Scenario& scenario,
                                   const FlightModel& model, const IntegratorOptions& options) {
  const AugmentedState end = propagate_terminal(schedule, scenario, model, options);
  ConstrainedValue v;
  v.f = objective(scenario.alpha, schedule.tf, end.x[kM]) / kCostScale;
  v.c = scaled_terminal_residual(scenario, end.x);
  return v;
}

Solution evaluate_indirect(const Scenario& scenario, const ArcSchedule& schedule,
                           const IntegratorOptions& options, double feas_tol) {
  const FlightModel model = make_flight_model(scenario);
  const IntegratorOptions opt = integrator_for(scenario, options);
  Solution sol;
  sol.method = "indirect";
  sol.scenario = scenario;
  sol.schedule = schedule;
  sol.law = opt.law;
  sol.steps_per_arc = opt.steps_per_arc;
  Trajectory traj = integrate_arcs(schedule, scenario, model, opt);
  sol.trajectory = reconstruct_costates(traj, scenario, model, opt);
  const StateVector& xf = sol.trajectory.back().x;
  sol.cost = objective(scenario.alpha, schedule.tf, xf[kM]);
  sol.terminal_residual = terminal_residual(scenario, xf);
  sol.violation = scaled_terminal_residual(scenario, xf).cwiseAbs().maxCoeff();
  sol.converged = sol.violation <= feas_tol;
  return sol;
}

Solution solve_indirect(const Scenario& scenario, const SolverOptions& options) {
  scenario.validate();
  const FlightModel model = make_flight_model(scenario);
  const IntegratorOptions full = integrator_for(scenario, options.integrator);

  const std::vector<ArcSchedule> grid = start_grid(scenario);
  const std::vector<int> order = shuffled_indices(static_cast<int>(grid.size()), options.seed);
  const int n = std::clamp(options.starts, 1, static_cast<int>(grid.size()));

  std::vector<StartOutcome> outcomes(n);
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int k = next++; k < n; k = next++) {
      outcomes[k] = run_start(k, grid[order[k]], scenario, model, options, full);
    }
  };
  const int threads = std::clamp(options.threads, 1, n);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  Solution sol;
  sol.method = "indirect";
  sol.scenario = scenario;
  sol.law = full.law;
  sol.steps_per_arc = full.steps_per_arc;
  int best = -1;
  int fallback = -1;
  for (int k = 0; k < n; ++k) {
    const StartReport& r = outcomes[k].report;
    sol.starts.push_back(r);
    sol.iterations += outcomes[k].outer_iterations;
    sol.evaluations += r.evaluations;
    if (r.feasible && (best < 0 || r.cost < sol.starts[best].cost)) best = k;
    if (std::isfinite(r.violation) &&
        (fallback < 0 || r.violation < sol.starts[fallback].violation)) {
      fallback = k;
    }
  }
  sol.restarts = n;
  const int chosen = best >= 0 ? best : fallback;
  sol.best_start = chosen;
  if (chosen < 0) {
    sol.converged = false;
    return sol;
  }

  try {
    Solution eval = evaluate_indirect(scenario, sol.starts[chosen].result, full,
                                      options.outer.feas_tol);
    eval.starts = std::move(sol.starts);
    eval.iterations = sol.iterations;
    eval.evaluations = sol.evaluations;
    eval.restarts = sol.restarts;
    eval.best_start = chosen;
    eval.converged = best >= 0 && eval.converged;
    eval.verification = verify_solution(eval, options.tolerances);
    return eval;
  } catch (const Error& e) {
    sol.schedule = sol.starts[chosen].result;
    sol.converged = false;
    sol.starts[chosen].error = e.what();
    return sol;
  }
}

}  // namespace cruiseopt
