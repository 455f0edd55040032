// Command line front end: solve-indirect, solve-direct, compare, sweep-alpha, verify.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cruiseopt/errors.hpp"
#include "cruiseopt/runner.hpp"

namespace {

void add_common(CLI::App* cmd, cruiseopt::RunConfig& cfg) {
  cmd->add_option("--scenario", cfg.scenario, "Scenario JSON file")->required();
  cmd->add_option("--out", cfg.out_dir, "Output directory")->required();
}

void add_indirect(CLI::App* cmd, cruiseopt::RunConfig& cfg) {
  cmd->add_option("--steps", cfg.steps_per_arc, "RK4 steps per arc")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Multi-start shuffle seed");
  cmd->add_option("--starts", cfg.starts, "Number of multi-start candidates")
      ->check(CLI::Range(1, 18));
  cmd->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
}

void add_tolerances(CLI::App* cmd, cruiseopt::RunConfig& cfg) {
  auto& t = cfg.tolerances;
  cmd->add_option("--tol-hamiltonian", t.hamiltonian, "Bound on |H + alpha| (scaled)");
  cmd->add_option("--tol-switching", t.switching, "Bound on |S| on the singular arc (scaled)");
  cmd->add_option("--tol-lc", t.legendre_clebsch, "Legendre-Clebsch slack");
  cmd->add_option("--tol-transversality", t.transversality, "Bound on |lambda_m(tf) - (alpha - 1)|");
  cmd->add_option("--tol-heading", t.heading, "Bound on the heading residual");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum time-fuel cruise trajectories by switching-point optimization"};
  app.require_subcommand(1);
  cruiseopt::RunConfig cfg;
  double alpha = 0.0;

  auto* ind = app.add_subcommand("solve-indirect", "Bang-singular-bang indirect solve");
  add_common(ind, cfg);
  auto* ind_alpha = ind->add_option("--alpha", alpha, "Cost weight in [0, 1]");
  add_indirect(ind, cfg);
  add_tolerances(ind, cfg);

  auto* dir = app.add_subcommand("solve-direct", "Euler single-shooting direct solve");
  add_common(dir, cfg);
  auto* dir_alpha = dir->add_option("--alpha", alpha, "Cost weight in [0, 1]");
  dir->add_option("--nodes", cfg.nodes, "Control nodes")->check(CLI::Range(2, 1000000));

  auto* cmp = app.add_subcommand("compare", "Indirect and direct solves of one scenario");
  add_common(cmp, cfg);
  auto* cmp_alpha = cmp->add_option("--alpha", alpha, "Cost weight in [0, 1]");
  cmp->add_option("--nodes", cfg.nodes, "Direct control nodes")->check(CLI::Range(2, 1000000));
  add_indirect(cmp, cfg);
  add_tolerances(cmp, cfg);

  auto* sweep = app.add_subcommand("sweep-alpha", "Indirect solves over a list of alpha values");
  add_common(sweep, cfg);
  sweep->add_option("--alphas", cfg.alphas, "Comma-separated alpha values")
      ->required()
      ->delimiter(',');
  add_indirect(sweep, cfg);
  add_tolerances(sweep, cfg);

  auto* ver = app.add_subcommand("verify", "Re-check a stored solution directory");
  ver->add_option("--solution", cfg.solution_dir, "Directory holding solution.json")->required();
  add_tolerances(ver, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cruiseopt::kExitSolverFailure;
  }

  if (ind->parsed()) cfg.command = cruiseopt::Command::kSolveIndirect;
  if (dir->parsed()) cfg.command = cruiseopt::Command::kSolveDirect;
  if (cmp->parsed()) cfg.command = cruiseopt::Command::kCompare;
  if (sweep->parsed()) cfg.command = cruiseopt::Command::kSweepAlpha;
  if (ver->parsed()) cfg.command = cruiseopt::Command::kVerify;
  if (ind_alpha->count() + dir_alpha->count() + cmp_alpha->count() > 0) cfg.alpha = alpha;

  try {
    const cruiseopt::RunReport rep = cruiseopt::run(cfg);
    std::cout << rep.text << "\n";
    return rep.exit_code;
  } catch (const cruiseopt::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const cruiseopt::Error& e) {
    std::cerr << "failed: " << e.what() << "\n";
  }
  return cruiseopt::kExitSolverFailure;
}
