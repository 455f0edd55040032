#include "cruiseopt/solution_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cruiseopt/errors.hpp"
#include "cruiseopt/io.hpp"

namespace cruiseopt {

namespace {

using nlohmann::json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json schedule_to_json(const ArcSchedule& s) {
  return json{{"t1_s", s.t1}, {"t2_s", s.t2}, {"tf_s", s.tf}, {"chi0_rad", s.chi0}};
}

double field(const json& doc, const char* key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_number()) {
    throw ValidationError(where + key, "missing or not a number");
  }
  return it->get<double>();
}

ArcSchedule schedule_from_json(const json& doc) {
  ArcSchedule s;
  s.t1 = field(doc, "t1_s", "schedule.");
  s.t2 = field(doc, "t2_s", "schedule.");
  s.tf = field(doc, "tf_s", "schedule.");
  s.chi0 = field(doc, "chi0_rad", "schedule.");
  return s;
}

}  // namespace

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols{"t",     "x",     "y",     "v",     "m",    "chi",
                                             "pi",    "S",     "H",     "lam_x", "lam_y", "lam_v",
                                             "lam_m", "lc",    "detM",  "mach",  "cas_flag"};
  return cols;
}

std::string format_number(double value) {
  if (!std::isfinite(value)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out;
  const auto& cols = trajectory_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += "\r\n";
  for (const auto& s : traj.samples) {
    const double row[] = {s.t,
                          s.x[kX],
                          s.x[kY],
                          s.x[kV],
                          s.x[kM],
                          s.heading,
                          s.throttle,
                          s.switching,
                          s.hamiltonian,
                          s.costate[kX],
                          s.costate[kY],
                          s.costate[kV],
                          s.costate[kM],
                          s.legendre_clebsch,
                          s.det,
                          s.mach};
    for (double v : row) {
      out += format_number(v);
      out += ',';
    }
    out += s.cas_ok ? '0' : '1';
    out += "\r\n";
  }
  return out;
}

void emit_trajectory_csv(const Solution& solution, const std::filesystem::path& path) {
  write_text_file(path, trajectory_csv(solution.trajectory));
}

std::string law_name(SingularLaw law) {
  return law == SingularLaw::kCostateFeedback ? "costate_feedback" : "determinant_transport";
}

std::string status_name(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kSkipped:
      break;
  }
  return "skipped";
}

json verification_to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back(json{{"name", c.name},
                          {"status", status_name(c.status)},
                          {"measured", finite_or_null(c.measured)},
                          {"tolerance", finite_or_null(c.tolerance)},
                          {"informational", c.informational},
                          {"detail", c.detail}});
  }
  return json{{"passed", report.passed()}, {"checks", checks}};
}

DirectGrid direct_grid_of(const Solution& sol) {
  const auto& smp = sol.trajectory.samples;
  if (smp.size() < 3) throw DomainError("direct trajectory too short");
  const int n = static_cast<int>(smp.size()) - 1;
  DirectGrid g;
  g.tf = smp.back().t;
  g.heading.resize(n);
  g.throttle.resize(n);
  for (int k = 0; k < n; ++k) {
    g.heading[k] = smp[k].heading;
    g.throttle[k] = smp[k].throttle;
  }
  return g;
}

json solution_to_json(const Solution& sol) {
  json doc;
  doc["method"] = sol.method;
  doc["scenario"] = scenario_to_json(sol.scenario, true);
  doc["converged"] = sol.converged;
  doc["cost"] = finite_or_null(sol.cost);
  doc["violation"] = finite_or_null(sol.violation);
  doc["terminal_residual"] = json{{"x_m", finite_or_null(sol.terminal_residual[0])},
                                  {"y_m", finite_or_null(sol.terminal_residual[1])},
                                  {"v_mps", finite_or_null(sol.terminal_residual[2])}};
  if (!sol.trajectory.samples.empty()) {
    const Sample& last = sol.trajectory.back();
    doc["tf_s"] = last.t;
    doc["mf_kg"] = last.x[kM];
    doc["clamp_count"] = sol.trajectory.clamp_count;
  }
  if (sol.method == "direct") {
    if (!sol.trajectory.samples.empty()) {
      const DirectGrid g = direct_grid_of(sol);
      doc["controls"] = json{{"nodes", g.nodes()},
                             {"tf_s", g.tf},
                             {"heading_rad", std::vector<double>(g.heading.begin(), g.heading.end())},
                             {"throttle", std::vector<double>(g.throttle.begin(), g.throttle.end())}};
    }
  } else {
    doc["schedule"] = schedule_to_json(sol.schedule);
    doc["law"] = law_name(sol.law);
    doc["steps_per_arc"] = sol.steps_per_arc;
  }
  doc["iterations"] = sol.iterations;
  doc["evaluations"] = sol.evaluations;
  doc["restarts"] = sol.restarts;
  doc["best_start"] = sol.best_start;
  json starts = json::array();
  for (const auto& r : sol.starts) {
    json s{{"index", r.index},
           {"cost", finite_or_null(r.cost)},
           {"violation", finite_or_null(r.violation)},
           {"feasible", r.feasible},
           {"evaluations", r.evaluations},
           {"failed_evaluations", r.failed_evaluations},
           {"error", r.error}};
    if (sol.method != "direct") {
      s["initial"] = schedule_to_json(r.initial);
      s["result"] = schedule_to_json(r.result);
    }
    starts.push_back(s);
  }
  doc["starts"] = starts;
  doc["verification"] = verification_to_json(sol.verification);
  return doc;
}

StoredSolution stored_solution_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("", "solution must be a JSON object");
  StoredSolution out;
  auto method = doc.find("method");
  if (method == doc.end() || !method->is_string() ||
      (*method != "indirect" && *method != "direct")) {
    throw ValidationError("method", "must be \"indirect\" or \"direct\"");
  }
  out.method = method->get<std::string>();
  auto sc = doc.find("scenario");
  if (sc == doc.end()) throw ValidationError("scenario", "missing required field");
  out.scenario = scenario_from_json(*sc, {});
  if (auto c = doc.find("cost"); c != doc.end() && c->is_number()) out.cost = c->get<double>();
  if (auto c = doc.find("converged"); c != doc.end() && c->is_boolean()) {
    out.converged = c->get<bool>();
  }
  if (out.method == "indirect") {
    auto s = doc.find("schedule");
    if (s == doc.end() || !s->is_object()) throw ValidationError("schedule", "missing");
    out.schedule = schedule_from_json(*s);
    out.steps_per_arc = static_cast<int>(field(doc, "steps_per_arc", ""));
    if (out.steps_per_arc < 1) throw ValidationError("steps_per_arc", "must be >= 1");
  } else {
    auto c = doc.find("controls");
    if (c == doc.end() || !c->is_object()) throw ValidationError("controls", "missing");
    const auto h = c->value("heading_rad", std::vector<double>{});
    const auto p = c->value("throttle", std::vector<double>{});
    DirectGrid g;
    g.heading = Eigen::Map<const Eigen::VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
    g.throttle = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
    g.tf = field(*c, "tf_s", "controls.");
    try {
      g.validate(out.scenario);
    } catch (const DomainError& e) {
      throw ValidationError("controls", e.what());
    }
    out.grid = g;
  }
  return out;
}

StoredSolution load_stored_solution(const std::filesystem::path& dir) {
  const auto path = dir / "solution.json";
  std::ifstream in(path);
  if (!in) throw ValidationError("", "cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError("", path.string() + ": " + e.what());
  }
  return stored_solution_from_json(doc);
}

}  // namespace cruiseopt
