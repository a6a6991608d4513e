#include "ecoroute/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "ecoroute/error.hpp"
#include "ecoroute/seeding.hpp"
#include "ecoroute/stochastic.hpp"

namespace ecoroute {

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  std::vector<std::exception_ptr> errors(count);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::mutex mutex;
    std::size_t next = 0;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t i = 0;
          {
            std::lock_guard lock(mutex);
            if (next == count) return;
            i = next++;
          }
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

OracleSummary summarize(const OracleSolution& s) {
  return {s.optimum, s.gap, std::string(to_string(s.method)), s.converged, s.x};
}

std::uint64_t replicate_seed(const ScenarioConfig& config, std::size_t r) {
  return derive_seed(config.seed, SeedStream::noise, r);
}

namespace {

TemperatureSchedule schedule_of(const ScenarioConfig& c) {
  return c.eta_exponent == 0.0 ? TemperatureSchedule::constant(c.eta0)
                               : TemperatureSchedule::power_law(c.eta0, c.eta_exponent);
}

std::uint64_t run_hash(const Scenario& scenario, const ScenarioConfig& config) {
  auto cj = config_to_json(config);
  cj.erase("threads");
  return fnv1a64(scenario_to_json(scenario).dump() + cj.dump());
}

OracleSummary oracle_for(const Scenario& scenario) {
  return summarize(solve_reference_optimum(scenario.model()));
}

std::string mode_label(const Scenario& s) { return s.mode ? s.mode->label() : "explicit"; }

}  // namespace

RunResult simulate(const Scenario& scenario, const ScenarioConfig& config, std::uint64_t seed,
                   double noise_fraction, const OracleSummary& oracle) {
  const auto start = std::chrono::steady_clock::now();
  const auto model = scenario.model();
  const auto schedule = schedule_of(config);

  IntegrationOptions options;
  options.dt = config.dt;
  options.horizon = config.horizon;
  options.sample_interval = config.window;
  options.record_states = true;

  Trajectory traj;
  if (noise_fraction > 0.0) {
    StochasticOptions so;
    so.integration = options;
    so.seed = seed;
    so.integrator = Integrator::sbr;
    traj = run_stochastic(model, schedule, VolatilitySpec::fraction_of_mean(noise_fraction), so);
  } else {
    traj = run_deterministic(model, schedule, options);
  }

  RunResult r;
  r.scenario_hash = run_hash(scenario, config);
  r.mode = mode_label(scenario);
  r.seed = seed;
  r.noise_fraction = noise_fraction;
  r.price_scale = traj.price_scale;
  r.total_rate = scenario.total_rate();
  for (const auto& s : traj.samples) {
    r.times.push_back(s.t);
    r.consumption.push_back(s.consumption);
    r.average_consumption.push_back(s.average_consumption);
    r.capacity_violation.push_back(s.capacity_violation);
    r.routed_flow.push_back(std::accumulate(s.x.begin(), s.x.end(), 0.0));
  }
  const auto& last = traj.final();
  const FlowState x{last.x};
  r.final_report = is_nash(x.values, model.prices(x), model.layout());
  r.final_consumption = last.consumption;
  r.oracle_optimum = oracle.optimum;
  r.realized_gap = last.consumption - oracle.optimum;
  r.final_report.optimality_gap = r.realized_gap;
  if (oracle.x.values.size() == x.values.size()) {
    r.final_report.distance = normalized_l1_distance(x.values, oracle.x.values, model.layout());
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ModeRow> run_mode_comparison(const Scenario& base, const ScenarioConfig& config,
                                         const std::vector<RoutingMode>& modes) {
  if (modes.empty()) throw ValidationError("mode comparison needs at least one mode");
  const std::size_t reps = config.noise_fraction > 0.0 ? config.replicates : 1;
  std::vector<Scenario> scenarios;
  for (const auto& m : modes) scenarios.push_back(with_mode(base, m));
  std::vector<OracleSummary> oracles(modes.size());
  parallel_for(modes.size(), config.threads,
               [&](std::size_t i) { oracles[i] = oracle_for(scenarios[i]); });

  std::vector<RunResult> runs(modes.size() * reps);
  parallel_for(runs.size(), config.threads, [&](std::size_t k) {
    const std::size_t i = k / reps;
    const std::size_t r = k % reps;
    runs[k] = simulate(scenarios[i], config, replicate_seed(config, r), config.noise_fraction,
                       oracles[i]);
  });

  std::vector<ModeRow> rows;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    ModeRow row;
    row.mode = modes[i].label();
    row.paths = scenarios[i].paths.size();
    double sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) sum += runs[i * reps + r].final_consumption;
    row.final_consumption = sum / static_cast<double>(reps);
    row.per_gbps = row.final_consumption / scenarios[i].total_rate();
    row.oracle = oracles[i];
    row.run = runs[i * reps];
    rows.push_back(std::move(row));
  }
  std::size_t baseline = 0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].kind == RoutingMode::Kind::single_shortest) {
      baseline = i;
      break;
    }
  }
  const double ref = rows[baseline].final_consumption;
  for (auto& row : rows) row.relative_gain = ref > 0.0 ? (ref - row.final_consumption) / ref : 0.0;
  return rows;
}

std::vector<ModeRow> run_mode_comparison(const ScenarioConfig& config,
                                         const std::vector<RoutingMode>& modes) {
  return run_mode_comparison(generate_scenario(config), config, modes);
}

std::vector<NoisePoint> run_noise_sweep(const Scenario& scenario, const ScenarioConfig& config,
                                        const std::vector<double>& z_values) {
  for (double z : z_values) {
    if (!(z >= 0.0 && z <= 1.0)) throw ValidationError("noise fractions must lie in [0, 1]");
  }
  const auto oracle = oracle_for(scenario);
  const std::size_t reps = config.replicates;
  std::vector<RunResult> runs(z_values.size() * reps);
  parallel_for(runs.size(), config.threads, [&](std::size_t k) {
    runs[k] = simulate(scenario, config, replicate_seed(config, k % reps), z_values[k / reps],
                       oracle);
  });
  std::vector<NoisePoint> out;
  for (std::size_t i = 0; i < z_values.size(); ++i) {
    NoisePoint p;
    p.z = z_values[i];
    p.optimum = oracle.optimum;
    p.times = runs[i * reps].times;
    p.mean_average.assign(p.times.size(), 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& avg = runs[i * reps + r].average_consumption;
      for (std::size_t k = 0; k < avg.size(); ++k) {
        p.mean_average[k] += avg[k] / static_cast<double>(reps);
      }
      p.final_mean += runs[i * reps + r].final_consumption / static_cast<double>(reps);
    }
    const double target = oracle.optimum + 0.05 * std::abs(oracle.optimum);
    for (std::size_t k = 0; k < p.times.size(); ++k) {
      if (p.mean_average[k] <= target) {
        p.time_to_5pct = p.times[k];
        break;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<NoisePoint> run_noise_sweep(const ScenarioConfig& config,
                                        const std::vector<double>& z_values) {
  return run_noise_sweep(generate_scenario(config), config, z_values);
}

BoxStats box_stats(std::vector<double> v) {
  BoxStats s;
  s.count = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  s.min = v.front();
  s.max = v.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  const double iqr = s.q3 - s.q1;
  for (double x : v) {
    if (x < s.q1 - 1.5 * iqr || x > s.q3 + 1.5 * iqr) s.outliers.push_back(x);
  }
  return s;
}

std::vector<ViolationRow> run_capacity_study(const Scenario& base, const ScenarioConfig& config,
                                             const std::vector<RoutingMode>& modes,
                                             double noise_fraction) {
  if (modes.empty()) throw ValidationError("capacity study needs at least one mode");
  const bool capacitated = std::any_of(base.costs.begin(), base.costs.end(),
                                       [](const EdgeCostSpec& c) { return c.capacity(); });
  std::vector<Scenario> scenarios;
  for (const auto& m : modes) scenarios.push_back(with_mode(base, m));
  const std::size_t reps = config.replicates;
  std::vector<RunResult> runs(modes.size() * reps);
  const OracleSummary none;
  parallel_for(runs.size(), config.threads, [&](std::size_t k) {
    runs[k] = simulate(scenarios[k / reps], config, replicate_seed(config, k % reps),
                       noise_fraction, none);
  });
  const double burn_in = config.burn_in_fraction * config.horizon;
  std::vector<ViolationRow> rows;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    ViolationRow row;
    row.mode = modes[i].label();
    row.noise_fraction = noise_fraction;
    row.no_capacities = !capacitated;
    std::vector<double> samples;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& run = runs[i * reps + r];
      for (std::size_t k = 0; k < run.times.size(); ++k) {
        if (run.times[k] > 0.0 && run.times[k] >= burn_in) {
          samples.push_back(run.capacity_violation[k]);
        }
      }
    }
    row.stats = box_stats(std::move(samples));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ViolationRow> run_capacity_study(const ScenarioConfig& config,
                                             const std::vector<RoutingMode>& modes,
                                             double noise_fraction) {
  return run_capacity_study(generate_scenario(config), config, modes, noise_fraction);
}

std::size_t windows_to_fraction(const std::vector<double>& gain, double fraction) {
  if (gain.empty()) return 0;
  const double target = fraction * gain.back();
  if (!(gain.back() > 0.0)) return 0;
  std::size_t k = gain.size();
  while (k > 0 && gain[k - 1] >= target) --k;
  return k;
}

std::vector<ScalePoint> run_scalability(const ScenarioConfig& config,
                                        const std::vector<std::size_t>& source_counts) {
  std::vector<ScalePoint> out(source_counts.size());
  std::vector<Scenario> mixed(source_counts.size());
  std::vector<Scenario> single(source_counts.size());
  for (std::size_t i = 0; i < source_counts.size(); ++i) {
    auto c = config;
    c.sources = source_counts[i];
    mixed[i] = generate_scenario(c);
    single[i] = with_mode(mixed[i], RoutingMode::single());
  }
  std::vector<RunResult> runs(2 * source_counts.size());
  std::vector<OracleSummary> oracles(source_counts.size());
  parallel_for(source_counts.size(), config.threads,
               [&](std::size_t i) { oracles[i] = oracle_for(mixed[i]); });
  parallel_for(runs.size(), config.threads, [&](std::size_t k) {
    const std::size_t i = k / 2;
    auto c = config;
    c.sources = source_counts[i];
    const auto& s = k % 2 == 0 ? single[i] : mixed[i];
    runs[k] = simulate(s, c, replicate_seed(c, 0), 0.0, oracles[i]);
  });
  for (std::size_t i = 0; i < source_counts.size(); ++i) {
    auto& p = out[i];
    const auto& rs = runs[2 * i];
    const auto& rm = runs[2 * i + 1];
    p.sources = source_counts[i];
    p.total_rate = mixed[i].total_rate();
    p.single_consumption = rs.final_consumption;
    p.mixed_consumption = rm.final_consumption;
    p.gain = p.single_consumption - p.mixed_consumption;
    p.relative_gain = p.single_consumption > 0.0 ? p.gain / p.single_consumption : 0.0;
    for (double c : rm.consumption) p.gain_trace.push_back(p.single_consumption - c);
    p.windows_to_99 = windows_to_fraction(p.gain_trace);
    p.optimum = oracles[i].optimum;
  }
  return out;
}

}  // namespace ecoroute
