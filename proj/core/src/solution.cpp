#include "cruiseopt/solution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cruiseopt {

namespace {

std::string window(double first, double last) {
  std::ostringstream os;
  os.precision(6);
  os << "violated on t in [" << first << ", " << last << "] s";
  return os.str();
}

CheckResult skipped(const std::string& name, const std::string& why) {
  CheckResult r;
  r.name = name;
  r.status = CheckStatus::kSkipped;
  r.detail = why;
  return r;
}

CheckResult bound_check(const std::string& name, double measured, double tol, bool ok) {
  CheckResult r;
  r.name = name;
  r.measured = measured;
  r.tolerance = tol;
  r.status = ok ? CheckStatus::kPass : CheckStatus::kFail;
  return r;
}

// Tracks the time window over which a per-sample condition fails.
struct Violations {
  double first = kNaN;
  double last = kNaN;
  void add(double t) {
    if (std::isnan(first)) first = t;
    last = t;
  }
  bool any() const { return !std::isnan(first); }
};

}  // namespace

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return !c.informational && c.status == CheckStatus::kFail;
  });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Eigen::Vector3d terminal_residual(const Scenario& scenario, const StateVector& xf) {
  return {xf[kX] - scenario.xf, xf[kY] - scenario.yf, xf[kV] - scenario.vf};
}

Eigen::Vector3d scaled_terminal_residual(const Scenario& scenario, const StateVector& xf) {
  const Eigen::Vector3d r = terminal_residual(scenario, xf);
  return {r[0] / 1e6, r[1] / 1e6, r[2] / 1e2};
}

double objective(double alpha, double tf, double mf) { return alpha * tf + (alpha - 1.0) * mf; }

VerificationReport verify_solution(const Solution& solution, const Tolerances& tol) {
  VerificationReport rep;
  const Trajectory& traj = solution.trajectory;
  const double alpha = solution.scenario.alpha;
  const char* names[] = {"hamiltonian", "switching_sign", "legendre_clebsch", "transversality",
                         "heading"};

  if (!traj.has_costates || traj.samples.empty()) {
    std::string why = "co-states unavailable";
    if (solution.method == "direct") {
      why += " (direct transcription)";
    } else if (!(alpha > 0.0)) {
      why += " (alpha = 0: singular system is homogeneous)";
    } else if (traj.schedule.t1 == traj.schedule.t2) {
      why += " (bang-bang schedule without both arcs)";
    }
    for (const char* n : names) rep.checks.push_back(skipped(n, why));
  } else {
    const auto& smp = traj.samples;
    const double t1 = traj.schedule.t1;
    const double t2 = traj.schedule.t2;

    double h_err = 0.0;
    Violations h_bad;
    for (const auto& s : smp) {
      const double e = std::abs(s.hamiltonian + alpha);
      h_err = std::max(h_err, std::isfinite(e) ? e : INFINITY);
      if (!(e <= tol.hamiltonian)) h_bad.add(s.t);
    }
    auto h = bound_check("hamiltonian", h_err, tol.hamiltonian, !h_bad.any());
    if (h_bad.any()) h.detail = window(h_bad.first, h_bad.last);
    rep.checks.push_back(h);

    // S < 0 strictly before t1, S > 0 strictly after t2, |S| small on [t1, t2].
    double s_max_pre = -INFINITY, s_min_post = INFINITY, s_abs_mid = 0.0;
    Violations pre_bad, post_bad, mid_bad;
    for (const auto& s : smp) {
      if (s.arc == 0 && s.t < t1) {
        s_max_pre = std::max(s_max_pre, s.switching);
        if (!(s.switching < 0.0)) pre_bad.add(s.t);
      } else if (s.arc == 2 && s.t > t2) {
        s_min_post = std::min(s_min_post, s.switching);
        if (!(s.switching > 0.0)) post_bad.add(s.t);
      } else if (s.t >= t1 && s.t <= t2) {
        s_abs_mid = std::max(s_abs_mid, std::abs(s.switching));
        if (!(std::abs(s.switching) <= tol.switching)) mid_bad.add(s.t);
      }
    }
    auto sw = bound_check("switching_sign", s_abs_mid, tol.switching,
                          !pre_bad.any() && !post_bad.any() && !mid_bad.any());
    std::ostringstream d;
    d.precision(6);
    d << "max S before t1 = " << s_max_pre << ", min S after t2 = " << s_min_post;
    if (pre_bad.any()) d << "; first arc " << window(pre_bad.first, pre_bad.last);
    if (post_bad.any()) d << "; last arc " << window(post_bad.first, post_bad.last);
    if (mid_bad.any()) d << "; singular arc " << window(mid_bad.first, mid_bad.last);
    sw.detail = d.str();
    rep.checks.push_back(sw);

    const bool bang_bang = t1 == t2;
    if (bang_bang) {
      rep.checks.push_back(skipped("legendre_clebsch", "no singular arc"));
    } else {
      double lc_min = INFINITY;
      Violations lc_bad;
      for (const auto& s : smp) {
        if (s.t < t1 || s.t > t2) continue;
        lc_min = std::min(lc_min, s.legendre_clebsch);
        if (!(s.legendre_clebsch >= -tol.legendre_clebsch)) lc_bad.add(s.t);
      }
      auto lc = bound_check("legendre_clebsch", lc_min, tol.legendre_clebsch, !lc_bad.any());
      if (lc_bad.any()) lc.detail = window(lc_bad.first, lc_bad.last);
      rep.checks.push_back(lc);
    }

    const double lm = smp.back().costate[kM];
    const double tr = std::abs(lm - (alpha - 1.0));
    auto trc = bound_check("transversality", tr, tol.transversality, tr <= tol.transversality);
    if (bang_bang) trc.detail = "imposed by the bang-bang co-state reconstruction";
    rep.checks.push_back(trc);

    double hd = 0.0;
    for (const auto& s : smp) {
      const double lx = s.costate[kX], ly = s.costate[kY];
      const double r = std::abs(lx * std::sin(s.heading) - ly * std::cos(s.heading)) /
                       std::hypot(lx, ly);
      hd = std::max(hd, std::isfinite(r) ? r : INFINITY);
    }
    rep.checks.push_back(bound_check("heading", hd, tol.heading, hd <= tol.heading));
  }

  for (const bool mach : {true, false}) {
    int bad = 0;
    Violations win;
    for (const auto& s : traj.samples) {
      if (!(mach ? s.mach_ok : s.cas_ok)) {
        ++bad;
        win.add(s.t);
      }
    }
    CheckResult r;
    r.name = mach ? "mach_envelope" : "cas_envelope";
    r.informational = true;
    r.measured = bad;
    r.tolerance = 0.0;
    r.status = bad == 0 ? CheckStatus::kPass : CheckStatus::kFail;
    if (bad) r.detail = std::to_string(bad) + " samples outside; " + window(win.first, win.last);
    rep.checks.push_back(r);
  }
  return rep;
}

}  // namespace cruiseopt
