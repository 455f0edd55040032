#include <benchmark/benchmark.h>

#include "cruiseopt/direct_baseline.hpp"
#include "cruiseopt/io.hpp"
#include "cruiseopt/switching_solver.hpp"

using namespace cruiseopt;

namespace {

Scenario table1() { return load_scenario(std::string(CRUISEOPT_DATA_DIR) + "/scenarios/table1.json"); }

// Converged alpha = 0.4 schedule.
const ArcSchedule kSchedule{105.09928384586264, 6257.7667372118467, 6297.2729273543628,
                            0.69833710728740728};

void BM_SingularThrottle(benchmark::State& state) {
  const FlightModel m = make_flight_model(table1());
  const StateVector x(5e5, 2.5e5, 250.0, 53000.0);
  const double rate = heading_rate(m, x, 0.55);
  for (auto _ : state) benchmark::DoNotOptimize(singular_throttle(m, x, 0.55, rate, 0.4));
}
BENCHMARK(BM_SingularThrottle);

void BM_CostateRhs(benchmark::State& state) {
  const FlightModel m = make_flight_model(table1());
  const StateVector x(5e5, 2.5e5, 250.0, 53000.0);
  const CostateVector l(1e-3, 2e-3, -1.0, -0.6);
  for (auto _ : state) benchmark::DoNotOptimize(costate_rhs(m, x, l, {0.55, 0.6}));
}
BENCHMARK(BM_CostateRhs);

void BM_PropagateTerminal(benchmark::State& state) {
  const Scenario sc = table1();
  const FlightModel m = make_flight_model(sc);
  IntegratorOptions o;
  o.steps_per_arc = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(propagate_terminal(kSchedule, sc, m, o));
}
BENCHMARK(BM_PropagateTerminal)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_EvaluateIndirect(benchmark::State& state) {
  const Scenario sc = table1();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_indirect(sc, kSchedule, IntegratorOptions{}));
}
BENCHMARK(BM_EvaluateIndirect)->Unit(benchmark::kMillisecond);

void BM_DirectMeritGradient(benchmark::State& state) {
  const Scenario sc = table1();
  const FlightModel m = make_flight_model(sc);
  const Eigen::VectorXd z = pack_decision(cold_start(sc, static_cast<int>(state.range(0))));
  AugLagState st;
  st.mu = Eigen::Vector3d::Zero();
  st.rho = 10.0;
  Eigen::VectorXd g;
  for (auto _ : state) benchmark::DoNotOptimize(direct_merit(z, st, sc, m, &g));
}
BENCHMARK(BM_DirectMeritGradient)->Arg(400)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_SolveIndirect(benchmark::State& state) {
  const Scenario sc = table1();
  SolverOptions o;
  o.starts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_indirect(sc, o));
}
BENCHMARK(BM_SolveIndirect)->Arg(1)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
