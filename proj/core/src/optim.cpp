#include "cruiseopt/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

namespace cruiseopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sanitize(double v) { return std::isfinite(v) ? v : kInf; }

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

MinimizeResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                           const Eigen::VectorXd& x0, const Eigen::VectorXd& initial_step,
                           const NelderMeadOptions& options) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  MinimizeResult res;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++res.evals;
    return sanitize(f(x));
  };
  val[0] = eval(x0);
  for (int i = 0; i < n; ++i) {
    pts[i + 1][i] += initial_step[i];
    val[i + 1] = eval(pts[i + 1]);
  }
  std::vector<int> order(n + 1);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return val[a] < val[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[n - 1];

    double diameter = 0.0;
    for (int i = 0; i <= n; ++i) {
      diameter = std::max(diameter, (pts[i] - pts[best]).cwiseAbs().maxCoeff());
    }
    const double spread = val[worst] - val[best];
    if (std::isfinite(spread) && spread <= options.f_tol * std::max(1.0, std::abs(val[best])) &&
        diameter <= options.x_tol) {
      res.converged = true;
      break;
    }
    if (res.evals >= options.max_evals) break;
    ++res.iterations;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= n;

    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < val[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    // Contraction, outside or inside.
    const bool outside = fr < val[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < std::min(fr, val[worst])) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      val[i] = eval(pts[i]);
    }
  }
  const int best = static_cast<int>(std::min_element(val.begin(), val.end()) - val.begin());
  res.x = pts[best];
  res.f = val[best];
  return res;
}

MinimizeResult spg(const ValueGrad& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
                   const Eigen::VectorXd& upper, const SpgOptions& options) {
  MinimizeResult res;
  Eigen::VectorXd x = project(x0, lower, upper);
  Eigen::VectorXd g(x.size());
  double fx = f(x, &g);
  ++res.evals;
  if (!std::isfinite(fx)) {
    res.x = x;
    res.f = kInf;
    return res;
  }
  std::deque<double> history{fx};
  Eigen::VectorXd pg = project(x - g, lower, upper) - x;
  double lambda =
      std::clamp(1.0 / std::max(pg.cwiseAbs().maxCoeff(), 1e-300), options.step_min,
                 options.step_max);
  Eigen::VectorXd gn(x.size());
  for (; res.iterations < options.max_iter; ++res.iterations) {
    pg = project(x - g, lower, upper) - x;
    if (pg.cwiseAbs().maxCoeff() <= options.pg_tol) {
      res.converged = true;
      break;
    }
    const Eigen::VectorXd d = project(x - lambda * g, lower, upper) - x;
    const double gtd = g.dot(d);
    const double fmax = *std::max_element(history.begin(), history.end());
    double step = 1.0;
    Eigen::VectorXd xn;
    double fn = kInf;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = x + step * d;
      fn = sanitize(f(xn, nullptr));
      ++res.evals;
      if (fn <= fmax + options.gamma * step * gtd) {
        accepted = true;
        break;
      }
      double trial = 0.5 * step;
      if (std::isfinite(fn)) {
        const double denom = fn - fx - step * gtd;
        if (denom > 0.0) {
          const double q = -0.5 * step * step * gtd / denom;
          if (q >= 0.1 * step && q <= 0.9 * step) trial = q;
        }
      }
      step = trial;
    }
    if (!accepted) break;
    fn = f(xn, &gn);
    ++res.evals;
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = gn - g;
    x = xn;
    g = gn;
    fx = fn;
    history.push_back(fx);
    if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    const double sy = s.dot(y);
    lambda = sy <= 0.0 ? options.step_max
                       : std::clamp(s.squaredNorm() / sy, options.step_min, options.step_max);
  }
  res.x = x;
  res.f = fx;
  return res;
}

AugLagResult augmented_lagrangian(const std::function<ConstrainedValue(const Eigen::VectorXd&)>& eval,
                                  const Eigen::VectorXd& x0, int n_constraints,
                                  const InnerSolver& inner, const AugLagOptions& options) {
  AugLagResult res;
  res.state.mu = Eigen::VectorXd::Zero(n_constraints);
  res.state.rho = options.rho0;
  res.x = x0;
  res.value = eval(x0);
  double prev_violation = kInf;
  double prev_f = kInf;
  bool prev_feasible = false;
  for (int k = 0; k < options.max_outer; ++k) {
    const MinimizeResult r = inner(res.state, res.x);
    res.inner_evals += r.evals;
    ++res.outer_iterations;
    const ConstrainedValue v = eval(r.x);
    if (!std::isfinite(v.f) || !v.c.allFinite()) break;
    res.x = r.x;
    res.value = v;
    const double violation = v.c.cwiseAbs().maxCoeff();
    res.feasible = violation <= options.feas_tol;
    if (res.feasible && prev_feasible &&
        std::abs(v.f - prev_f) <= options.f_tol * std::max(1.0, std::abs(v.f))) {
      break;
    }
    res.state.mu += res.state.rho * v.c;
    if (violation > options.shrink * prev_violation) {
      res.state.rho = std::min(res.state.rho * options.rho_growth, options.rho_max);
    }
    prev_violation = violation;
    prev_f = v.f;
    prev_feasible = res.feasible;
  }
  return res;
}

}  // namespace cruiseopt
