#include <benchmark/benchmark.h>

#include <vector>

#include "ecoroute/dynamics.hpp"
#include "ecoroute/experiments.hpp"
#include "ecoroute/generator.hpp"
#include "ecoroute/oracle.hpp"
#include "ecoroute/stochastic.hpp"

using namespace ecoroute;

namespace {

ScenarioConfig config_for(std::int64_t nodes) {
  ScenarioConfig c;
  c.nodes = static_cast<std::size_t>(nodes);
  c.sources = c.nodes / 5;
  c.data_centers = c.nodes / 10;
  c.legacy.count = c.nodes / 10;
  c.horizon = 1.0;
  c.replicates = 1;
  c.threads = 1;
  return c;
}

// Same graph and paths with smooth quadratic costs, so the oracle takes
// the Frank–Wolfe branch.
Scenario smooth_variant(const Scenario& s) {
  const std::vector<EdgeCostSpec> costs(s.costs.size(),
                                        EdgeCostSpec::custom(PowerLawCost{0.0, 1.0, 2.0}));
  return make_scenario(s.name + "-smooth", s.graph, s.commodities, costs, s.paths);
}

void BM_GibbsMap(benchmark::State& state) {
  const auto s = generate_scenario(config_for(state.range(0)));
  const auto m = s.model();
  std::vector<double> y(m.path_count()), x(m.path_count());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.01 * static_cast<double>(i % 7);
  for (auto _ : state) {
    gibbs_map_into(y, 10.0, m.layout(), x);
    benchmark::DoNotOptimize(x.data());
  }
  state.counters["paths"] = static_cast<double>(m.path_count());
}
BENCHMARK(BM_GibbsMap)->Arg(20)->Arg(50)->Arg(100);

void BM_ScoreStep(benchmark::State& state) {
  const auto s = generate_scenario(config_for(state.range(0)));
  const auto m = s.model();
  ScoreState y{std::vector<double>(m.path_count(), 0.0), 0.0};
  for (auto _ : state) {
    const auto x = gibbs_map(y, 10.0, m.layout());
    y = step_scores(y, x, 1e-4, m);
    benchmark::DoNotOptimize(y.values.data());
  }
}
BENCHMARK(BM_ScoreStep)->Arg(20)->Arg(50)->Arg(100);

void BM_StochasticStep(benchmark::State& state) {
  const auto s = generate_scenario(config_for(state.range(0)));
  const auto m = s.model();
  const std::vector<double> sigma(m.edge_count(), 0.5);
  NoiseDriver noise(7, m.edge_count(), 1e-4);
  std::vector<double> dw(m.edge_count());
  ScoreState y{std::vector<double>(m.path_count(), 0.0), 0.0};
  for (auto _ : state) {
    const auto x = gibbs_map(y, 10.0, m.layout());
    noise.next(dw);
    y = step_sbr(y, x, 1e-4, dw, sigma, m);
    benchmark::DoNotOptimize(y.values.data());
  }
}
BENCHMARK(BM_StochasticStep)->Arg(20)->Arg(50);

void BM_OracleLinearProgram(benchmark::State& state) {
  const auto s = generate_scenario(config_for(state.range(0)));
  const auto m = s.model();
  for (auto _ : state) benchmark::DoNotOptimize(solve_reference_optimum(m).optimum);
}
BENCHMARK(BM_OracleLinearProgram)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_OracleFrankWolfe(benchmark::State& state) {
  const auto s = smooth_variant(generate_scenario(config_for(state.range(0))));
  const auto m = s.model();
  OracleOptions opts;
  opts.tolerance = 1e-7;
  for (auto _ : state) benchmark::DoNotOptimize(solve_reference_optimum(m, opts).optimum);
}
BENCHMARK(BM_OracleFrankWolfe)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_SimulateOneWindow(benchmark::State& state) {
  const auto c = config_for(state.range(0));
  const auto s = generate_scenario(c);
  const auto oracle = summarize(solve_reference_optimum(s.model()));
  for (auto _ : state) benchmark::DoNotOptimize(simulate(s, c, 1, 0.0, oracle).final_consumption);
}
BENCHMARK(BM_SimulateOneWindow)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
