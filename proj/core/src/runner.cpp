#include "cruiseopt/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cruiseopt/direct_baseline.hpp"
#include "cruiseopt/errors.hpp"
#include "cruiseopt/io.hpp"
#include "cruiseopt/solution_io.hpp"
#include "cruiseopt/switching_solver.hpp"

namespace cruiseopt {

namespace {

using nlohmann::json;

Scenario scenario_for(const RunConfig& cfg, std::optional<double> alpha) {
  Scenario sc = load_scenario(cfg.scenario);
  if (alpha) {
    sc.alpha = *alpha;
    sc.validate();
  }
  return sc;
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.starts = cfg.starts;
  o.seed = cfg.seed;
  o.threads = cfg.threads;
  o.integrator.steps_per_arc = cfg.steps_per_arc;
  o.tolerances = cfg.tolerances;
  return o;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

std::string describe(const Solution& sol) {
  std::ostringstream os;
  os.precision(10);
  os << sol.method << ": " << (sol.converged ? "converged" : "NOT converged") << ", J = " << sol.cost
     << ", violation = " << sol.violation;
  if (sol.method == "indirect") {
    os << "\n  t1 = " << sol.schedule.t1 << " s, t2 = " << sol.schedule.t2
       << " s, tf = " << sol.schedule.tf << " s, chi0 = " << sol.schedule.chi0 << " rad";
  } else if (!sol.trajectory.samples.empty()) {
    os << "\n  tf = " << sol.trajectory.back().t << " s, nodes = "
       << sol.trajectory.samples.size() - 1;
  }
  for (const auto& c : sol.verification.checks) {
    os << "\n  " << c.name << ": " << status_name(c.status);
    if (c.informational) os << " (informational)";
    if (std::isfinite(c.measured)) os << ", measured " << c.measured;
    if (!c.detail.empty()) os << ", " << c.detail;
  }
  for (const auto& w : sol.scenario.warnings) os << "\n  warning: " << w;
  return os.str();
}

std::string alpha_label(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "alpha_%.10g", alpha);
  return buf;
}

// Linear interpolation of a sampled control at time t.
double sample_at(const Trajectory& traj, double t, bool throttle) {
  const auto& s = traj.samples;
  auto it = std::lower_bound(s.begin(), s.end(), t,
                             [](const Sample& a, double v) { return a.t < v; });
  const auto value = [&](const Sample& a) { return throttle ? a.throttle : a.heading; };
  if (it == s.begin()) return value(s.front());
  if (it == s.end()) return value(s.back());
  const Sample& b = *it;
  const Sample& a = *std::prev(it);
  const double w = b.t > a.t ? (t - a.t) / (b.t - a.t) : 1.0;
  return value(a) + w * (value(b) - value(a));
}

}  // namespace

void RunConfig::validate() const {
  const auto check_alpha = [](double a, const std::string& field) {
    if (!(std::isfinite(a) && a >= 0.0 && a <= 1.0)) {
      throw ValidationError(field, "must lie in [0, 1]");
    }
  };
  if (alpha) check_alpha(*alpha, "alpha");
  for (double a : alphas) check_alpha(a, "alphas");
  if (command == Command::kSweepAlpha && alphas.empty()) {
    throw ValidationError("alphas", "at least one value is required");
  }
  if (command == Command::kVerify) {
    if (solution_dir.empty()) throw ValidationError("solution", "directory is required");
  } else {
    if (scenario.empty()) throw ValidationError("scenario", "file is required");
    if (out_dir.empty()) throw ValidationError("out", "directory is required");
  }
  if (starts < 1) throw ValidationError("starts", "must be >= 1");
  if (steps_per_arc < 1) throw ValidationError("steps", "must be >= 1");
  if (nodes < 2) throw ValidationError("nodes", "must be >= 2");
  if (threads < 1) throw ValidationError("threads", "must be >= 1");
}

int exit_code_for(const Solution& sol) {
  if (!sol.converged) return kExitSolverFailure;
  return sol.verification.passed() ? kExitOk : kExitVerificationFailure;
}

void write_solution(const Solution& sol, const std::filesystem::path& dir) {
  ensure_dir(dir);
  write_text_file(dir / "solution.json", dump_json(solution_to_json(sol)));
  emit_trajectory_csv(sol, dir / "trajectory.csv");
}

RunReport run_solve_indirect(const RunConfig& cfg) {
  const Solution sol = solve_indirect(scenario_for(cfg, cfg.alpha), solver_options(cfg));
  write_solution(sol, cfg.out_dir);
  return {exit_code_for(sol), describe(sol)};
}

RunReport run_solve_direct(const RunConfig& cfg) {
  DirectOptions o;
  o.nodes = cfg.nodes;
  Solution sol = solve_direct(scenario_for(cfg, cfg.alpha), o);
  sol.verification = verify_solution(sol, cfg.tolerances);
  write_solution(sol, cfg.out_dir);
  return {exit_code_for(sol), describe(sol)};
}

RunReport run_compare(const RunConfig& cfg) {
  const Scenario sc = scenario_for(cfg, cfg.alpha);
  ensure_dir(cfg.out_dir);
  std::optional<Solution> ind, dir;
  std::string ind_error, dir_error;
  try {
    ind = solve_indirect(sc, solver_options(cfg));
    write_solution(*ind, cfg.out_dir / "indirect");
  } catch (const Error& e) {
    ind_error = e.what();
  }
  try {
    DirectOptions o;
    o.nodes = cfg.nodes;
    dir = solve_direct(sc, o);
    dir->verification = verify_solution(*dir, cfg.tolerances);
    write_solution(*dir, cfg.out_dir / "direct");
  } catch (const Error& e) {
    dir_error = e.what();
  }

  const auto entry = [](const std::optional<Solution>& s, const std::string& err) {
    json j{{"converged", s && s->converged}, {"error", err}};
    j["cost"] = s && std::isfinite(s->cost) ? json(s->cost) : json(nullptr);
    return j;
  };
  json rep{{"alpha", sc.alpha}, {"indirect", entry(ind, ind_error)},
           {"direct", entry(dir, dir_error)}};
  double gap = kNaN;
  if (ind && dir && std::isfinite(ind->cost) && std::isfinite(dir->cost)) {
    gap = std::abs(ind->cost - dir->cost) / std::abs(dir->cost);
    rep["relative_gap"] = gap;
  } else {
    rep["relative_gap"] = nullptr;
  }
  write_text_file(cfg.out_dir / "compare.json", dump_json(rep));

  if (dir && !dir->trajectory.samples.empty()) {
    std::string csv = "t,chi_direct,pi_direct,chi_indirect,pi_indirect\r\n";
    const auto& smp = dir->trajectory.samples;
    const bool have_ind = ind && !ind->trajectory.samples.empty();
    for (std::size_t k = 0; k + 1 < smp.size(); ++k) {
      const double t = smp[k].t;
      csv += format_number(t) + ',' + format_number(smp[k].heading) + ',' +
             format_number(smp[k].throttle) + ',';
      csv += have_ind ? format_number(sample_at(ind->trajectory, t, false)) : "";
      csv += ',';
      csv += have_ind ? format_number(sample_at(ind->trajectory, t, true)) : "";
      csv += "\r\n";
    }
    write_text_file(cfg.out_dir / "controls.csv", csv);
  }

  RunReport out;
  std::ostringstream os;
  os.precision(10);
  if (ind) os << describe(*ind) << "\n";
  if (!ind_error.empty()) os << "indirect failed: " << ind_error << "\n";
  if (dir) os << describe(*dir) << "\n";
  if (!dir_error.empty()) os << "direct failed: " << dir_error << "\n";
  os << "relative gap: " << gap;
  out.text = os.str();
  if (!ind || !dir || !ind->converged || !dir->converged) {
    out.exit_code = kExitSolverFailure;
  } else if (!ind->verification.passed() || !dir->verification.passed()) {
    out.exit_code = kExitVerificationFailure;
  }
  return out;
}

RunReport run_sweep(const RunConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const int n = static_cast<int>(cfg.alphas.size());
  std::vector<std::optional<Solution>> sols(n);
  std::vector<std::string> errors(n);
  RunConfig single = cfg;
  single.threads = 1;
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int k = next++; k < n; k = next++) {
      try {
        sols[k] = solve_indirect(scenario_for(cfg, cfg.alphas[k]), solver_options(single));
        write_solution(*sols[k], cfg.out_dir / alpha_label(cfg.alphas[k]));
      } catch (const Error& e) {
        errors[k] = e.what();
      }
    }
  };
  const int threads = std::clamp(cfg.threads, 1, std::max(n, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::string csv = "alpha,t1,t2,tf,cost,mf,converged,verified\r\n";
  std::ostringstream os;
  os.precision(10);
  RunReport out;
  bool solver_failed = false, verify_failed = false;
  for (int k = 0; k < n; ++k) {
    csv += format_number(cfg.alphas[k]) + ',';
    if (sols[k]) {
      const Solution& s = *sols[k];
      const double mf = s.trajectory.samples.empty() ? kNaN : s.trajectory.back().x[kM];
      csv += format_number(s.schedule.t1) + ',' + format_number(s.schedule.t2) + ',' +
             format_number(s.schedule.tf) + ',' + format_number(s.cost) + ',' +
             format_number(mf) + ',' + (s.converged ? "1" : "0") + ',' +
             (s.verification.passed() ? "1" : "0");
      os << "alpha = " << cfg.alphas[k] << "\n" << describe(s) << "\n";
      solver_failed |= !s.converged;
      verify_failed |= !s.verification.passed();
    } else {
      csv += ",,,,,0,0";
      os << "alpha = " << cfg.alphas[k] << " failed: " << errors[k] << "\n";
      solver_failed = true;
    }
    csv += "\r\n";
  }
  out.exit_code = solver_failed   ? kExitSolverFailure
                  : verify_failed ? kExitVerificationFailure
                                  : kExitOk;
  write_text_file(cfg.out_dir / "trend.csv", csv);
  out.text = os.str();
  return out;
}

RunReport run_verify(const RunConfig& cfg) {
  const StoredSolution st = load_stored_solution(cfg.solution_dir);
  Solution sol;
  if (st.method == "indirect") {
    IntegratorOptions o;
    o.steps_per_arc = st.steps_per_arc;
    sol = evaluate_indirect(st.scenario, st.schedule, o);
  } else {
    const FlightModel model = make_flight_model(st.scenario);
    sol.method = "direct";
    sol.scenario = st.scenario;
    sol.trajectory = euler_rollout(*st.grid, st.scenario, model);
    const StateVector& xf = sol.trajectory.back().x;
    sol.cost = objective(st.scenario.alpha, st.grid->tf, xf[kM]);
    sol.terminal_residual = terminal_residual(st.scenario, xf);
    sol.violation = scaled_terminal_residual(st.scenario, xf).cwiseAbs().maxCoeff();
    sol.converged = sol.violation <= 1e-6;
  }
  sol.verification = verify_solution(sol, cfg.tolerances);
  RunReport out{exit_code_for(sol), describe(sol)};
  if (std::isfinite(st.cost)) {
    std::ostringstream os;
    os.precision(17);
    os << "\n  stored J = " << st.cost << ", recomputed J = " << sol.cost;
    out.text += os.str();
  }
  return out;
}

RunReport run(const RunConfig& cfg) {
  cfg.validate();
  switch (cfg.command) {
    case Command::kSolveIndirect:
      return run_solve_indirect(cfg);
    case Command::kSolveDirect:
      return run_solve_direct(cfg);
    case Command::kCompare:
      return run_compare(cfg);
    case Command::kSweepAlpha:
      return run_sweep(cfg);
    case Command::kVerify:
      break;
  }
  return run_verify(cfg);
}

}  // namespace cruiseopt
