#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cruiseopt/direct_baseline.hpp"
#include "cruiseopt/solution.hpp"

namespace cruiseopt {

/// Column names of the trajectory CSV, in order.
const std::vector<std::string>& trajectory_columns();

/**
 * One row per sample: t, x, y, v, m, chi, pi, S, H, lam_x, lam_y, lam_v,
 * lam_m, lc, detM, mach, cas_flag. Numbers use 17 significant digits in
 * scientific notation; unavailable values are empty fields. cas_flag is 1
 * when the calibrated airspeed is outside [v_CAS_min, v_CAS_max], else 0.
 * Lines end with CRLF.
 */
std::string trajectory_csv(const Trajectory& trajectory);
void emit_trajectory_csv(const Solution& solution, const std::filesystem::path& path);

/// Same number format as the trajectory CSV.
std::string format_number(double value);

std::string law_name(SingularLaw law);
std::string status_name(CheckStatus status);

/**
 * Self-contained record of a run: the scenario with inline aircraft
 * coefficients, the schedule (indirect) or the node controls (direct),
 * summary numbers, per-start reports and the verification report.
 */
nlohmann::json solution_to_json(const Solution& solution);
nlohmann::json verification_to_json(const VerificationReport& report);

/// What is needed to re-evaluate a stored run.
struct StoredSolution {
  std::string method;
  Scenario scenario;
  ArcSchedule schedule;              ///< indirect only
  int steps_per_arc = 0;             ///< indirect only
  std::optional<DirectGrid> grid;    ///< direct only
  double cost = kNaN;
  bool converged = false;
};

StoredSolution stored_solution_from_json(const nlohmann::json& doc);
/// Reads `dir`/solution.json. Throws ValidationError on schema problems.
StoredSolution load_stored_solution(const std::filesystem::path& dir);

/// Node controls of a direct solution's trajectory.
DirectGrid direct_grid_of(const Solution& solution);

}  // namespace cruiseopt
