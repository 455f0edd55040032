// Acceptance run: one PASS/FAIL line per criterion, default solver options.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cruiseopt/direct_baseline.hpp"
#include "cruiseopt/io.hpp"
#include "cruiseopt/runner.hpp"
#include "cruiseopt/switching_solver.hpp"

using namespace cruiseopt;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& name, const std::string& detail) {
  std::printf("%s [%2d] %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

fs::path data(const std::string& rel) { return fs::path(CRUISEOPT_DATA_DIR) / rel; }

Scenario scenario(const std::string& name, double alpha) {
  Scenario s = load_scenario(data("scenarios/" + name + ".json"));
  s.alpha = alpha;
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double lambda_m_error(const Solution& s) {
  if (!s.trajectory.has_costates) return INFINITY;
  return std::abs(s.trajectory.back().costate[kM] - (s.scenario.alpha - 1.0));
}

// ---------------------------------------------------------------------------
// Derivative oracles.

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

const StateVector kFdStep{1.0, 1.0, 1e-4, 1e-2};

template <class F>
Eigen::Matrix4d fd_jacobian(F&& f, const StateVector& x) {
  Eigen::Matrix4d j;
  for (int i = 0; i < 4; ++i) {
    StateVector xp = x, xm = x;
    xp[i] += kFdStep[i];
    xm[i] -= kFdStep[i];
    j.col(i) = (f(xp) - f(xm)) / (2 * kFdStep[i]);
  }
  return j;
}

struct Draw {
  StateVector x;
  double chi;
  double pi;
  CostateVector lambda;
};

double derivative_oracles(const FlightModel& m, int points, std::string* worst) {
  std::mt19937_64 rng(2024);
  const auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  std::map<std::string, double> err;
  const Scaling sc;
  for (int i = 0; i < points; ++i) {
    Draw d;
    d.x << u(-2e5, 1.7e6), u(-3e5, 9e5), u(150, 300), u(4e4, 5.9e4);
    d.chi = u(-M_PI, M_PI);
    d.pi = u(0, 1);
    d.lambda << u(-1e-2, 1e-2), u(-1e-2, 1e-2), u(-3, 3), u(-1, 0);
    const Controls ctl{d.chi, d.pi};

    auto& jq = err["jacobian_Q"];
    jq = std::max(jq, rel(jacobian_Q(m, d.x, d.chi),
                          fd_jacobian([&](const StateVector& y) { return eval_Q(m, y, d.chi); }, d.x)));
    auto& jp = err["jacobian_P"];
    jp = std::max(jp, rel(jacobian_P(m, d.x),
                          fd_jacobian([&](const StateVector& y) { return eval_P(m, y); }, d.x)));

    const double v = d.x[kV], mass = d.x[kM];
    const DragValue dr = m.drag(mass, v);
    Eigen::Vector2d an(dr.d_dv, dr.d_dm), fd;
    fd << (m.drag(mass, v + 1e-3).value - m.drag(mass, v - 1e-3).value) / 2e-3,
        (m.drag(mass + 1.0, v).value - m.drag(mass - 1.0, v).value) / 2.0;
    auto& jd = err["drag"];
    jd = std::max(jd, rel(an, fd));

    const WindGradient g = wind_gradients(m.wind(), d.x[kX], d.x[kY]);
    Eigen::Matrix2d gw, fw;
    gw << g.dwx_dx, g.dwx_dy, g.dwy_dx, g.dwy_dy;
    const double h = 1.0;
    const auto wp = [&](double dx, double dy) { return wind_at(m.wind(), d.x[kX] + dx, d.x[kY] + dy); };
    fw << (wp(h, 0).wx - wp(-h, 0).wx) / (2 * h), (wp(0, h).wx - wp(0, -h).wx) / (2 * h),
        (wp(h, 0).wy - wp(-h, 0).wy) / (2 * h), (wp(0, h).wy - wp(0, -h).wy) / (2 * h);
    auto& jw = err["wind"];
    jw = std::max(jw, rel(gw, fw));

    const Eigen::Matrix4d jf = fd_jacobian([&](const StateVector& y) { return eval_F(m, y, ctl); }, d.x);
    const CostateVector fdc = -jf.transpose() * d.lambda;
    auto& jc = err["costate_rhs"];
    jc = std::max(jc, rel(sc.to_scaled(costate_rhs(m, d.x, d.lambda, ctl)), sc.to_scaled(fdc)));

    const auto fq = fd_jacobian([&](const StateVector& y) { return eval_Q(m, y, d.chi); }, d.x);
    const auto fp = fd_jacobian([&](const StateVector& y) { return eval_P(m, y); }, d.x);
    const StateVector bracket = fp * eval_Q(m, d.x, d.chi) - fq * eval_P(m, d.x);
    auto& ja = err["lie_A"];
    ja = std::max(ja, rel(lie_A(m, d.x, d.chi).cwiseQuotient(sc.state), bracket.cwiseQuotient(sc.state)));
  }
  double max = 0;
  std::ostringstream os;
  for (const auto& [k, e] : err) {
    os << k << "=" << fmt("%.1e", e) << " ";
    max = std::max(max, e);
  }
  *worst = os.str();
  return max;
}

double max_relative_divergence(const WindField& w, int points) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ux(-2e5, 1.7e6), uy(-3e5, 9e5);
  double worst = 0;
  for (int i = 0; i < points; ++i) {
    const WindGradient g = wind_gradients(w, ux(rng), uy(rng));
    const double scale = std::abs(g.dwx_dx) + std::abs(g.dwy_dy);
    worst = std::max(worst, std::abs(g.dwx_dx + g.dwy_dy) / std::max(scale, 1e-300));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Throttle histories on normalized time.

double throttle_at(const Trajectory& tr, double tau) {
  const double t = tau * tr.back().t;
  const auto& s = tr.samples;
  auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const Sample& a) { return v < a.t; });
  if (it == s.begin()) return s.front().throttle;
  if (it == s.end()) return s.back().throttle;
  const Sample& b = *it;
  const Sample& a = *std::prev(it);
  if (b.t == a.t) return b.throttle;
  return a.throttle + (b.throttle - a.throttle) * (t - a.t) / (b.t - a.t);
}

double l1_relative_throttle(const Trajectory& a, const Trajectory& b, int points) {
  double num = 0, den = 0;
  for (int i = 0; i <= points; ++i) {
    const double tau = static_cast<double>(i) / points;
    const double w = (i == 0 || i == points) ? 0.5 : 1.0;
    const double pa = throttle_at(a, tau), pb = throttle_at(b, tau);
    num += w * std::abs(pa - pb);
    den += w * std::abs(pb);
  }
  return num / den;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main() {
  const SolverOptions defaults;

  // 1. Cross-method agreement.
  const auto t0 = std::chrono::steady_clock::now();
  const Solution ind = solve_indirect(scenario("table1", 0.4), defaults);
  const Solution dir = solve_direct(scenario("table1", 0.4));
  const double elapsed = seconds_since(t0);
  {
    const double gap = std::abs(ind.cost - dir.cost) / std::abs(dir.cost);
    const bool ok = ind.converged && dir.converged && gap <= 1e-3 && elapsed < 300.0;
    report(1, ok, "cross-method agreement",
           "J_indirect=" + fmt("%.6f", ind.cost) + " J_direct=" + fmt("%.6f", dir.cost) +
               " rel.gap=" + fmt("%.2e", gap) + " (<=1e-3) time=" + fmt("%.1f", elapsed) + "s");
  }

  // 2. Transversality over alpha in {0.1, 0.4, 0.5}.
  std::map<double, Solution> sweep;
  sweep[0.4] = ind;
  for (double a : {0.1, 0.3, 0.5}) sweep[a] = solve_indirect(scenario("table1", a), defaults);
  {
    bool ok = true;
    std::string detail;
    for (double a : {0.1, 0.4, 0.5}) {
      const Solution& s = sweep[a];
      const double e = lambda_m_error(s);
      ok = ok && s.converged && e < 1e-4;
      detail += "alpha=" + fmt("%.1f", a) + ":" + fmt("%.1e", e) + " ";
    }
    report(2, ok, "transversality |lambda_m(tf)-(alpha-1)|<1e-4", detail);
  }

  const Solution cw = solve_indirect(scenario("constant_wind", 0.4), defaults);

  // 3, 4. Over every converged run with co-states.
  std::vector<std::pair<std::string, const Solution*>> runs;
  for (const auto& [a, s] : sweep) runs.emplace_back("table1 alpha=" + fmt("%.1f", a), &s);
  runs.emplace_back("constant wind", &cw);
  {
    bool ok = true;
    double worst = 0;
    int counted = 0;
    for (const auto& [name, s] : runs) {
      if (!s->converged || !s->trajectory.has_costates) continue;
      ++counted;
      for (const auto& smp : s->trajectory.samples) {
        worst = std::max(worst, std::abs(smp.hamiltonian + s->scenario.alpha));
      }
    }
    ok = counted == static_cast<int>(runs.size()) && worst <= 1e-5;
    report(3, ok, "Hamiltonian constancy",
           "max|H+alpha|=" + fmt("%.2e", worst) + " over " + std::to_string(counted) + " runs (<=1e-5)");
  }
  {
    bool ok = true;
    double s_sing = 0, lc_min = INFINITY, s_before = -INFINITY, s_after = INFINITY;
    for (const auto& [name, s] : runs) {
      if (!s->trajectory.has_costates) {
        ok = false;
        continue;
      }
      const auto& sch = s->schedule;
      for (const auto& smp : s->trajectory.samples) {
        if (smp.arc == 0 && smp.t > 0.0 && smp.t < sch.t1) s_before = std::max(s_before, smp.switching);
        if (smp.arc == 2 && smp.t > sch.t2) s_after = std::min(s_after, smp.switching);
        if (smp.arc == 1) {
          s_sing = std::max(s_sing, std::abs(smp.switching));
          lc_min = std::min(lc_min, smp.legendre_clebsch);
        }
      }
    }
    ok = ok && s_before < 0.0 && s_after > 0.0 && s_sing <= 1e-6 && lc_min >= -1e-10;
    report(4, ok, "switching structure",
           "max S(Pi_max arc)=" + fmt("%.2e", s_before) + " min S(Pi_min arc)=" + fmt("%.2e", s_after) +
               " max|S| singular=" + fmt("%.1e", s_sing) + " min -<lambda,D>=" + fmt("%.3g", lc_min));
  }

  // 5. Bang-arc growth.
  {
    const double a = sweep[0.1].schedule.t1, b = sweep[0.3].schedule.t1, c = sweep[0.5].schedule.t1;
    const bool ok = sweep[0.1].converged && sweep[0.3].converged && sweep[0.5].converged && a <= b &&
                    b <= c;
    report(5, ok, "t1 nondecreasing in alpha",
           "t1(0.1)=" + fmt("%.2f", a) + " t1(0.3)=" + fmt("%.2f", b) + " t1(0.5)=" + fmt("%.2f", c));
  }

  // 6. Constant wind.
  {
    double drift = 0;
    for (const auto& s : cw.trajectory.samples) {
      drift = std::max(drift, std::abs(s.heading - cw.trajectory.samples.front().heading));
    }
    const double chi_err =
        std::abs(cw.schedule.chi0 - chi0_constant_wind(cw.scenario, cw.trajectory.back().t));
    const bool ok = cw.converged && drift < 1e-10 && chi_err < 1e-8;
    report(6, ok, "constant-wind heading",
           "max|chi-chi0|=" + fmt("%.1e", drift) + " (<1e-10) closed-form chi0 error=" +
               fmt("%.1e", chi_err) + " (<1e-8)");
  }

  // 7. Derivative oracles.
  {
    std::string detail;
    const double worst = derivative_oracles(make_flight_model(scenario("table1", 0.4)), 100, &detail);
    report(7, worst <= 1e-6, "derivative oracles (100 points, rel<=1e-6)", detail);
  }

  // 8. Divergence-free wind.
  {
    const double d = max_relative_divergence(scenario("table1", 0.4).wind, 1000);
    report(8, d < 1e-12, "divergence-free wind", "max relative |div w|=" + fmt("%.1e", d) + " (<1e-12)");
  }

  // 9. Singular feedback self-consistency on the alpha=0.4 run.
  {
    const Scenario sc = ind.scenario;
    const SingularArcConsistency c = singular_arc_consistency(ind.trajectory, sc, make_flight_model(sc));
    const bool ok = c.interior_points > 0 && c.max_abs_s2 < 1e-6 && c.backward_max_rel < 1e-6 &&
                    c.forward_step_max_rel < 1e-6;
    report(9, ok, "singular-arc consistency",
           "|S''|=" + fmt("%.1e", c.max_abs_s2) + " backward=" + fmt("%.1e", c.backward_max_rel) +
               " forward(per step)=" + fmt("%.1e", c.forward_step_max_rel) +
               " [single forward sweep " + fmt("%.1e", c.forward_max_rel) + ", unstable direction]");
  }

  // 10. alpha = 0 against alpha = 1e-6.
  {
    const Solution z = solve_indirect(scenario("table1", 0.0), defaults);
    const Solution e = solve_indirect(scenario("table1", 1e-6), defaults);
    const double dpi = l1_relative_throttle(z.trajectory, e.trajectory, 20000);
    const double mz = z.trajectory.back().x[kM], me = e.trajectory.back().x[kM];
    const double dm = std::abs(mz - me) / std::abs(me);
    const bool ok = z.converged && e.converged && z.law == SingularLaw::kDeterminantTransport &&
                    dpi <= 1e-3 && dm <= 1e-3;
    report(10, ok, "alpha=0 vs alpha=1e-6",
           "L1 rel. throttle diff=" + fmt("%.2e", dpi) + " final mass rel. diff=" + fmt("%.2e", dm) +
               " (both <=1e-3)");
  }

  // 11. Determinism of the written CSV files.
  {
    const fs::path root = fs::temp_directory_path() / "cruiseopt_acceptance";
    fs::remove_all(root);
    RunConfig cfg;
    cfg.command = Command::kCompare;
    cfg.scenario = data("scenarios/table1.json");
    cfg.seed = 5;
    bool ok = true;
    for (const char* tag : {"a", "b"}) {
      cfg.out_dir = root / tag;
      run(cfg);
    }
    int compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
      if (entry.path().extension() != ".csv") continue;
      const fs::path other = root / "b" / fs::relative(entry.path(), root / "a");
      const std::string x = slurp(entry.path());
      ok = ok && !x.empty() && x == slurp(other);
      ++compared;
    }
    ok = ok && compared >= 3;
    report(11, ok, "determinism", std::to_string(compared) + " CSV files byte-identical across two runs");
  }

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
