#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ecoroute/diagnostics.hpp"
#include "ecoroute/generator.hpp"
#include "ecoroute/oracle.hpp"
#include "ecoroute/scenario.hpp"

namespace ecoroute {

// Runs fn(0..count-1) on up to `threads` workers (0: hardware concurrency).
// Exceptions are rethrown on the caller's thread, lowest index first.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

struct OracleSummary {
  double optimum = 0.0;
  double certificate = 0.0;
  std::string method;
  bool converged = false;
  FlowState x;
};

OracleSummary summarize(const OracleSolution& solution);

struct RunResult {
  std::uint64_t scenario_hash = 0;
  std::string mode;
  std::uint64_t seed = 0;
  double noise_fraction = 0.0;
  double price_scale = 1.0;
  double total_rate = 0.0;
  std::vector<double> times;                // window boundaries
  std::vector<double> consumption;          // C(x(t))
  std::vector<double> average_consumption;  // C̄(t)
  std::vector<double> capacity_violation;   // fraction of capacitated edges over cap
  std::vector<double> routed_flow;          // Σ_α x_α(t)
  EquilibriumReport final_report;
  double final_consumption = 0.0;
  double oracle_optimum = 0.0;
  double realized_gap = 0.0;  // C(x(T)) − C*
  double wall_seconds = 0.0;
};

// Trajectory seed for replicate r.
std::uint64_t replicate_seed(const ScenarioConfig& config, std::size_t r);

/// One trajectory of the Boltzmann dynamics on `scenario` using the
/// schedule, step and horizon of `config`; z > 0 adds fraction-of-mean
/// price noise. Samples once per window.
RunResult simulate(const Scenario& scenario, const ScenarioConfig& config, std::uint64_t seed,
                   double noise_fraction, const OracleSummary& oracle);

struct ModeRow {
  std::string mode;
  std::size_t paths = 0;
  double final_consumption = 0.0;  // replicate mean
  double per_gbps = 0.0;           // final consumption / total demand
  double relative_gain = 0.0;      // vs the single-shortest (or first) row
  OracleSummary oracle;
  RunResult run;                   // first replicate
};

std::vector<ModeRow> run_mode_comparison(const Scenario& scenario, const ScenarioConfig& config,
                                         const std::vector<RoutingMode>& modes);
std::vector<ModeRow> run_mode_comparison(const ScenarioConfig& config,
                                         const std::vector<RoutingMode>& modes);

struct NoisePoint {
  double z = 0.0;
  std::vector<double> times;
  std::vector<double> mean_average;  // C̄(t) averaged over replicates
  std::optional<double> time_to_5pct;
  double final_mean = 0.0;
  double optimum = 0.0;
};

std::vector<NoisePoint> run_noise_sweep(const Scenario& scenario, const ScenarioConfig& config,
                                        const std::vector<double>& z_values);
std::vector<NoisePoint> run_noise_sweep(const ScenarioConfig& config,
                                        const std::vector<double>& z_values);

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::vector<double> outliers;  // beyond 1.5 IQR
  std::size_t count = 0;
};

// Quartiles by linear interpolation between order statistics.
BoxStats box_stats(std::vector<double> values);

struct ViolationRow {
  std::string mode;
  double noise_fraction = 0.0;
  bool no_capacities = false;
  BoxStats stats;
};

std::vector<ViolationRow> run_capacity_study(const Scenario& scenario,
                                             const ScenarioConfig& config,
                                             const std::vector<RoutingMode>& modes,
                                             double noise_fraction = 0.25);
std::vector<ViolationRow> run_capacity_study(const ScenarioConfig& config,
                                             const std::vector<RoutingMode>& modes,
                                             double noise_fraction = 0.25);

struct ScalePoint {
  std::size_t sources = 0;
  double total_rate = 0.0;
  double single_consumption = 0.0;
  double mixed_consumption = 0.0;
  double gain = 0.0;           // single − mixed, W
  double relative_gain = 0.0;  // gain / single
  std::size_t windows_to_99 = 0;
  std::vector<double> gain_trace;  // per window
  double optimum = 0.0;            // oracle C* under the mixed path set
};

// First window k with gain(j) ≥ 0.99 · final gain for every j ≥ k.
std::size_t windows_to_fraction(const std::vector<double>& gain, double fraction = 0.99);

// Mixed (config.mode) against single-shortest routing per source count.
std::vector<ScalePoint> run_scalability(const ScenarioConfig& config,
                                        const std::vector<std::size_t>& source_counts);

}  // namespace ecoroute
