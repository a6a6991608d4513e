// ecoroute: command line front end for the routing simulator.
//
//   ecoroute solve    [--config f | --scenario f]   reference optimum only
//   ecoroute simulate [--config f | --scenario f]   one trajectory
//   ecoroute sweep    modes|noise|capacity|scale     experiment studies
//   ecoroute report                                  every study, all formats

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecoroute/error.hpp"
#include "ecoroute/experiments.hpp"
#include "ecoroute/generator.hpp"
#include "ecoroute/oracle.hpp"
#include "ecoroute/report.hpp"
#include "ecoroute/scenario.hpp"

using namespace ecoroute;
namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string config_file;
  std::string scenario_file;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<double> eta0;
  std::optional<double> eta_exponent;
  std::optional<double> noise_fraction;
  std::optional<std::string> mode;
  std::optional<std::size_t> replicates;
  std::optional<std::size_t> threads;
  std::string out_dir;
  std::string save_scenario_file;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_file, "Scenario config JSON")->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "Master seed");
  app->add_option("--dt", o.dt, "Integration step");
  app->add_option("--horizon", o.horizon, "Simulated time");
  app->add_option("--eta0", o.eta0, "Initial learning rate");
  app->add_option("--eta-exponent", o.eta_exponent, "Learning-rate decay exponent");
  app->add_option("--noise-fraction", o.noise_fraction, "Price noise as a fraction of mean");
  app->add_option("--mode", o.mode, "Routing mode: single, k-shortest:K, m-closest:M, mixed:KxM");
  app->add_option("--replicates", o.replicates, "Trajectories per configuration");
  app->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  app->add_option("--out-dir", o.out_dir, "Write CSV, .dat and JSON files here");
}

ScenarioConfig resolve_config(const Overrides& o) {
  ScenarioConfig c = o.config_file.empty() ? ScenarioConfig{} : load_config(o.config_file);
  if (o.seed) c.seed = *o.seed;
  if (o.dt) c.dt = *o.dt;
  if (o.horizon) c.horizon = *o.horizon;
  if (o.eta0) c.eta0 = *o.eta0;
  if (o.eta_exponent) c.eta_exponent = *o.eta_exponent;
  if (o.noise_fraction) c.noise_fraction = *o.noise_fraction;
  if (o.mode) c.mode = RoutingMode::parse(*o.mode);
  if (o.replicates) c.replicates = *o.replicates;
  if (o.threads) c.threads = *o.threads;
  c.validate();
  return c;
}

Scenario resolve_scenario(const Overrides& o, const ScenarioConfig& c) {
  Scenario s;
  if (o.scenario_file.empty()) {
    s = generate_scenario(c);
  } else {
    s = load_scenario(o.scenario_file);
    if (o.mode) s = with_mode(s, c.mode);
  }
  if (!o.save_scenario_file.empty()) save_scenario(s, o.save_scenario_file);
  return s;
}

// Writes `name`.csv and `name`.dat with the same table writer.
template <typename Rows>
void emit_tables(const fs::path& dir, const std::string& name, const Rows& rows,
                 const ScenarioConfig& c,
                 void (*writer)(std::ostream&, TableWriter::Style, const Rows&,
                                const ScenarioConfig&)) {
  for (auto style : {TableWriter::Style::csv, TableWriter::Style::dat}) {
    std::ostringstream s;
    writer(s, style, rows, c);
    write_text(dir / (name + (style == TableWriter::Style::csv ? ".csv" : ".dat")), s.str());
  }
}

void emit_json(const fs::path& dir, const std::string& name, const nlohmann::json& j) {
  write_text(dir / (name + ".json"), j.dump(2) + "\n");
}

std::vector<RoutingMode> parse_modes(const std::vector<std::string>& labels) {
  std::vector<RoutingMode> modes;
  for (const auto& l : labels) modes.push_back(RoutingMode::parse(l));
  return modes;
}

int cmd_solve(const Overrides& o, bool hard_capacity) {
  const auto c = resolve_config(o);
  const auto s = resolve_scenario(o, c);
  OracleOptions opts;
  opts.hard_capacity = hard_capacity;
  const auto sol = solve_reference_optimum(s.model(), opts);
  auto body = to_json(sol);
  body["scenario"] = s.name;
  body["paths"] = s.paths.size();
  body["total_rate"] = s.total_rate();
  const auto report = make_report("solve", c, body);
  if (!o.out_dir.empty()) emit_json(o.out_dir, "solve", report);
  std::cout << "optimum " << format_number(sol.optimum) << " W via "
            << to_string(sol.method) << (sol.converged ? "" : " (not converged)") << "\n";
  return sol.converged ? 0 : 2;
}

int cmd_simulate(const Overrides& o) {
  const auto c = resolve_config(o);
  const auto s = resolve_scenario(o, c);
  const auto oracle = summarize(solve_reference_optimum(s.model()));
  const auto run = simulate(s, c, replicate_seed(c, 0), c.noise_fraction, oracle);
  if (!o.out_dir.empty()) {
    for (auto style : {TableWriter::Style::csv, TableWriter::Style::dat}) {
      std::ostringstream t;
      write_run_table(t, style, run, c);
      write_text(fs::path(o.out_dir) /
                     (style == TableWriter::Style::csv ? "run.csv" : "run.dat"),
                 t.str());
    }
    emit_json(o.out_dir, "run", make_report("simulate", c, to_json(run)));
  }
  std::cout << "final " << format_number(run.final_consumption) << " W, optimum "
            << format_number(run.oracle_optimum) << " W, gap "
            << format_number(run.realized_gap) << " W\n";
  return 0;
}

struct SweepArgs {
  std::string study;
  std::vector<std::string> modes{"single", "k-shortest:4", "m-closest:5", "mixed:4x5"};
  std::vector<double> z{0.0, 0.1, 0.25, 0.5};
  std::vector<std::size_t> sources{1, 2, 4, 8};
  double capacity_noise = 0.25;
};

void run_modes(const fs::path& dir, const ScenarioConfig& c, const SweepArgs& a) {
  const auto rows = run_mode_comparison(c, parse_modes(a.modes));
  for (const auto& r : rows) {
    std::cout << r.mode << ": " << format_number(r.final_consumption) << " W, gain "
              << format_number(100.0 * r.relative_gain) << "%\n";
  }
  if (dir.empty()) return;
  emit_tables(dir, "modes", rows, c, &write_mode_table);
  nlohmann::json body = nlohmann::json::array();
  for (const auto& r : rows) {
    body.push_back({{"mode", r.mode}, {"paths", r.paths},
                    {"final_consumption", r.final_consumption}, {"per_gbps", r.per_gbps},
                    {"relative_gain", r.relative_gain}, {"oracle", to_json(r.oracle)}});
  }
  emit_json(dir, "modes", make_report("modes", c, body));
}

void run_noise(const fs::path& dir, const ScenarioConfig& c, const SweepArgs& a) {
  const auto points = run_noise_sweep(c, a.z);
  for (const auto& p : points) {
    std::cout << "z=" << format_number(p.z) << ": final " << format_number(p.final_mean)
              << " W, within 5% at "
              << (p.time_to_5pct ? format_number(*p.time_to_5pct) : std::string("never"))
              << "\n";
  }
  if (dir.empty()) return;
  emit_tables(dir, "noise", points, c, &write_noise_table);
  nlohmann::json body = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json t = nullptr;
    if (p.time_to_5pct) t = *p.time_to_5pct;
    body.push_back({{"z", p.z}, {"final_mean", p.final_mean}, {"optimum", p.optimum},
                    {"time_to_5pct", t}});
  }
  emit_json(dir, "noise", make_report("noise", c, body));
}

void run_capacity(const fs::path& dir, const ScenarioConfig& c, const SweepArgs& a) {
  const auto rows = run_capacity_study(c, parse_modes(a.modes), a.capacity_noise);
  for (const auto& r : rows) {
    std::cout << r.mode << ": median violation " << format_number(r.stats.median)
              << (r.no_capacities ? " (no capacities)" : "") << "\n";
  }
  if (dir.empty()) return;
  emit_tables(dir, "capacity", rows, c, &write_capacity_table);
  nlohmann::json body = nlohmann::json::array();
  for (const auto& r : rows) {
    body.push_back({{"mode", r.mode}, {"noise_fraction", r.noise_fraction},
                    {"no_capacities", r.no_capacities}, {"stats", to_json(r.stats)}});
  }
  emit_json(dir, "capacity", make_report("capacity", c, body));
}

void run_scale(const fs::path& dir, const ScenarioConfig& c, const SweepArgs& a) {
  const auto points = run_scalability(c, a.sources);
  for (const auto& p : points) {
    std::cout << p.sources << " sources: gain " << format_number(p.gain) << " W ("
              << format_number(100.0 * p.relative_gain) << "%), 99% after "
              << p.windows_to_99 << " windows\n";
  }
  if (dir.empty()) return;
  emit_tables(dir, "scale", points, c, &write_scale_table);
  nlohmann::json body = nlohmann::json::array();
  for (const auto& p : points) {
    body.push_back({{"sources", p.sources}, {"total_rate", p.total_rate},
                    {"single_consumption", p.single_consumption},
                    {"mixed_consumption", p.mixed_consumption}, {"gain", p.gain},
                    {"relative_gain", p.relative_gain}, {"windows_to_99", p.windows_to_99},
                    {"optimum", p.optimum}});
  }
  emit_json(dir, "scale", make_report("scale", c, body));
}

int cmd_sweep(const Overrides& o, const SweepArgs& a) {
  const auto c = resolve_config(o);
  const fs::path dir = o.out_dir;
  if (a.study == "modes") run_modes(dir, c, a);
  else if (a.study == "noise") run_noise(dir, c, a);
  else if (a.study == "capacity") run_capacity(dir, c, a);
  else run_scale(dir, c, a);
  return 0;
}

int cmd_report(Overrides o, const SweepArgs& a) {
  if (o.out_dir.empty()) o.out_dir = "ecoroute-report";
  const auto c = resolve_config(o);
  const fs::path dir = o.out_dir;
  fs::create_directories(dir);
  emit_json(dir, "config", config_to_json(c));
  cmd_simulate(o);
  run_modes(dir, c, a);
  run_noise(dir, c, a);
  run_capacity(dir, c, a);
  run_scale(dir, c, a);
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-aware anycast routing simulator"};
  app.require_subcommand(1);

  Overrides o;
  SweepArgs sweep_args;
  bool hard_capacity = false;

  auto* solve = app.add_subcommand("solve", "Compute the reference optimum");
  add_common(solve, o);
  solve->add_option("--scenario", o.scenario_file, "Scenario JSON instead of a generated one")
      ->check(CLI::ExistingFile);
  solve->add_option("--save-scenario", o.save_scenario_file, "Write the scenario used as JSON");
  solve->add_flag("--hard-capacity", hard_capacity, "Treat capacities as hard constraints");

  auto* sim = app.add_subcommand("simulate", "Run one trajectory");
  add_common(sim, o);
  sim->add_option("--scenario", o.scenario_file, "Scenario JSON instead of a generated one")
      ->check(CLI::ExistingFile);
  sim->add_option("--save-scenario", o.save_scenario_file, "Write the scenario used as JSON");

  auto* sweep = app.add_subcommand("sweep", "Run a mode, noise, capacity or scale study");
  add_common(sweep, o);
  sweep->add_option("study", sweep_args.study, "Study to run")
      ->required()
      ->check(CLI::IsMember({"modes", "noise", "capacity", "scale"}));
  sweep->add_option("--modes", sweep_args.modes, "Routing modes to compare");
  sweep->add_option("--z", sweep_args.z, "Noise fractions for the noise study");
  sweep->add_option("--sources", sweep_args.sources, "Source counts for the scale study");
  sweep->add_option("--capacity-noise", sweep_args.capacity_noise,
                    "Noise fraction for the capacity study");

  auto* report = app.add_subcommand("report", "Run every study and write all outputs");
  add_common(report, o);
  report->add_option("--modes", sweep_args.modes, "Routing modes to compare");
  report->add_option("--z", sweep_args.z, "Noise fractions");
  report->add_option("--sources", sweep_args.sources, "Source counts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!o.out_dir.empty()) fs::create_directories(o.out_dir);
    if (*solve) return cmd_solve(o, hard_capacity);
    if (*sim) return cmd_simulate(o);
    if (*sweep) return cmd_sweep(o, sweep_args);
    return cmd_report(o, sweep_args);
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
