#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecoroute/consumption.hpp"
#include "ecoroute/model.hpp"
#include "ecoroute/routing.hpp"
#include "ecoroute/topology.hpp"

namespace ecoroute {

inline constexpr int kSchemaVersion = 1;

/// A complete routing instance: graph, demands, edge costs and the
/// candidate path set. Paths are grouped by commodity.
struct Scenario {
  std::string name;
  NetworkGraph graph;
  std::vector<Commodity> commodities;
  std::vector<EdgeCostSpec> costs;  // one per graph edge
  std::vector<Path> paths;
  // Routing mode the paths were enumerated with; empty for explicit paths.
  std::optional<RoutingMode> mode;

  CongestionModel model() const;
  double total_rate() const;
  // Number of candidate paths per commodity.
  std::vector<std::size_t> path_counts() const;
};

// Builds a scenario by enumerating candidate paths with `mode`.
Scenario make_scenario(std::string name, NetworkGraph graph, std::vector<Commodity> commodities,
                       std::vector<EdgeCostSpec> costs, const RoutingMode& mode);

// Builds a scenario from explicit paths (validated against their commodity).
Scenario make_scenario(std::string name, NetworkGraph graph, std::vector<Commodity> commodities,
                       std::vector<EdgeCostSpec> costs, std::vector<Path> paths);

// Same instance re-enumerated under another routing mode.
Scenario with_mode(const Scenario& scenario, const RoutingMode& mode);

// Same instance with every capacitated edge's ε replaced.
Scenario with_epsilon(const Scenario& scenario, double epsilon);

nlohmann::json cost_to_json(const EdgeCostSpec& spec);
EdgeCostSpec cost_from_json(const nlohmann::json& j);

// Scenario file format; see docs/scenario-format.md.
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::filesystem::path& file);
void save_scenario(const Scenario& scenario, const std::filesystem::path& file);

}  // namespace ecoroute
