#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cruiseopt/solution.hpp"

namespace cruiseopt {

enum class Command { kSolveIndirect, kSolveDirect, kCompare, kSweepAlpha, kVerify };

/// Everything a command needs. Unset optionals keep the scenario/solver
/// defaults.
struct RunConfig {
  Command command = Command::kSolveIndirect;
  std::filesystem::path scenario;
  std::filesystem::path solution_dir;  ///< verify only
  std::filesystem::path out_dir;
  std::optional<double> alpha;
  std::vector<double> alphas;  ///< sweep-alpha
  std::uint64_t seed = 0;
  int starts = 8;
  int steps_per_arc = 400;
  int nodes = 400;
  int threads = 1;
  Tolerances tolerances{};

  /// Throws ValidationError naming the offending option.
  void validate() const;
};

/// Exit code convention of the command line tool.
enum ExitCode : int { kExitOk = 0, kExitSolverFailure = 1, kExitVerificationFailure = 2 };

int exit_code_for(const Solution& solution);

struct RunReport {
  int exit_code = kExitOk;
  std::string text;  ///< human-readable summary
};

/// Writes solution.json and trajectory.csv into `dir` (created if needed).
void write_solution(const Solution& solution, const std::filesystem::path& dir);

RunReport run_solve_indirect(const RunConfig& config);
RunReport run_solve_direct(const RunConfig& config);

/**
 * Both solvers on the same scenario: indirect/ and direct/ solution sets,
 * compare.json with per-method cost and relative gap, controls.csv with both
 * control histories on the direct nodes. A failing method yields a partial
 * report.
 */
RunReport run_compare(const RunConfig& config);

/// One indirect solution set per alpha under alpha_<value>/ plus trend.csv.
RunReport run_sweep(const RunConfig& config);

/// Re-integrates a stored solution and re-runs the verification.
RunReport run_verify(const RunConfig& config);

RunReport run(const RunConfig& config);

}  // namespace cruiseopt
