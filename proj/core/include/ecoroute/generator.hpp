#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ecoroute/routing.hpp"
#include "ecoroute/scenario.hpp"

namespace ecoroute {

// Optical link power: amplifiers every span plus two terminal amplifiers,
// and a per-Gb/s transponder slope.
struct LinkCostParams {
  double watts_per_amplifier = 15.0;
  double span_km = 80.0;
  double terminal_amplifiers = 2.0;
  double slope = (35.0 + 0.8) / 10.0;  // W per Gb/s
  double capacity = 800.0;             // 80 channels × 10 Gb/s
};

struct DcCostParams {
  double idle = 6600.0;      // W
  double slope = 3.3;        // W per Gb/s
  double capacity = 2000.0;  // Gb/s
};

// Older data centers. Synthetic defaults: no published figures.
struct LegacyDcParams {
  std::size_t count = 5;
  double idle = 10000.0;
  double slope = 6.6;
  double capacity = 1000.0;
};

struct ScenarioConfig {
  // Topology: empty file means the geometric generator.
  std::string topology_file;
  std::size_t nodes = 50;
  double width_km = 4500.0;
  double height_km = 2500.0;
  double radius_km = 0.0;  // drop longer Gabriel edges; 0 keeps all

  std::size_t sources = 10;
  std::size_t data_centers = 10;
  LegacyDcParams legacy;
  double rate_min = 200.0;
  double rate_max = 400.0;
  RoutingMode mode = RoutingMode::mixed(4, 5);

  LinkCostParams link;
  DcCostParams dc;
  double cooling_factor = 2.0;  // multiplies data-center idle power and slope
  double epsilon = 1e-4;

  // Dynamics, in price units normalized by the largest initial path price.
  double eta0 = 10.0;
  double eta_exponent = 0.0;
  double noise_fraction = 0.0;
  double dt = 1e-4;
  double horizon = 12.0;
  double window = 1.0;            // one routing iteration
  double burn_in_fraction = 0.5;  // for violation statistics

  std::uint64_t seed = 1;
  std::size_t replicates = 4;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const;
};

nlohmann::json config_to_json(const ScenarioConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& file);

// FNV-1a of the canonical config JSON.
std::uint64_t scenario_hash(const ScenarioConfig& config);

// Link power for a fiber of the given length.
EdgeCostSpec link_cost(const LinkCostParams& params, double length_km, double epsilon);
EdgeCostSpec dc_cost(double idle, double slope, double capacity, double cooling, double epsilon);

/// Geometric network: uniform random points joined by their Gabriel graph
/// (or the file topology), D regular plus legacy data centers, S sources
/// with uniform rates. Sources and data centers are drawn independently
/// without replacement; more sources than nodes cycle through fresh
/// permutations. Throws ValidationError for infeasible counts.
Scenario generate_scenario(const ScenarioConfig& config);

}  // namespace ecoroute
