#include "ecoroute/generator.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "ecoroute/error.hpp"
#include "ecoroute/seeding.hpp"

namespace ecoroute {

using nlohmann::json;

void ScenarioConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be positive");
  };
  if (topology_file.empty() && nodes < 2) throw ValidationError("need at least 2 nodes");
  positive(width_km, "width_km");
  positive(height_km, "height_km");
  if (!(radius_km >= 0.0)) throw ValidationError("radius_km must be >= 0");
  if (sources < 1) throw ValidationError("need at least one source");
  if (data_centers < 1) throw ValidationError("need at least one data center");
  positive(rate_min, "rate_min");
  if (!(rate_max >= rate_min)) throw ValidationError("rate_max must be >= rate_min");
  if (mode.k < 1 || mode.m < 1) throw ValidationError("routing k and m must be >= 1");
  positive(link.span_km, "link.span_km");
  positive(link.capacity, "link.capacity");
  positive(dc.capacity, "dc.capacity");
  positive(legacy.capacity, "legacy.capacity");
  positive(cooling_factor, "cooling_factor");
  positive(epsilon, "epsilon");
  positive(eta0, "eta0");
  if (!(eta_exponent >= 0.0 && eta_exponent < 1.0)) {
    throw ValidationError("eta_exponent must lie in [0, 1)");
  }
  if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) {
    throw ValidationError("noise_fraction must lie in [0, 1]");
  }
  positive(dt, "dt");
  positive(horizon, "horizon");
  positive(window, "window");
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
    throw ValidationError("burn_in_fraction must lie in [0, 1)");
  }
  if (replicates < 1) throw ValidationError("replicates must be >= 1");
}

json config_to_json(const ScenarioConfig& c) {
  return {
      {"schema_version", kSchemaVersion},
      {"topology_file", c.topology_file},
      {"nodes", c.nodes},
      {"width_km", c.width_km},
      {"height_km", c.height_km},
      {"radius_km", c.radius_km},
      {"sources", c.sources},
      {"data_centers", c.data_centers},
      {"legacy",
       {{"count", c.legacy.count},
        {"idle", c.legacy.idle},
        {"slope", c.legacy.slope},
        {"capacity", c.legacy.capacity}}},
      {"rate_min", c.rate_min},
      {"rate_max", c.rate_max},
      {"mode", c.mode.label()},
      {"link",
       {{"watts_per_amplifier", c.link.watts_per_amplifier},
        {"span_km", c.link.span_km},
        {"terminal_amplifiers", c.link.terminal_amplifiers},
        {"slope", c.link.slope},
        {"capacity", c.link.capacity}}},
      {"dc", {{"idle", c.dc.idle}, {"slope", c.dc.slope}, {"capacity", c.dc.capacity}}},
      {"cooling_factor", c.cooling_factor},
      {"epsilon", c.epsilon},
      {"eta0", c.eta0},
      {"eta_exponent", c.eta_exponent},
      {"noise_fraction", c.noise_fraction},
      {"dt", c.dt},
      {"horizon", c.horizon},
      {"window", c.window},
      {"burn_in_fraction", c.burn_in_fraction},
      {"seed", c.seed},
      {"replicates", c.replicates},
      {"threads", c.threads},
  };
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void reject_unknown(const json& j, const json& reference, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!reference.contains(key)) {
      throw ValidationError("unknown config key '" + where + key + "'");
    }
    if (value.is_object() && reference.at(key).is_object()) {
      reject_unknown(value, reference.at(key), where + key + ".");
    }
  }
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  ScenarioConfig c;
  reject_unknown(j, config_to_json(c), "");
  try {
    if (j.value("schema_version", kSchemaVersion) != kSchemaVersion) {
      throw ValidationError("unsupported config schema_version");
    }
    read(j, "topology_file", c.topology_file);
    read(j, "nodes", c.nodes);
    read(j, "width_km", c.width_km);
    read(j, "height_km", c.height_km);
    read(j, "radius_km", c.radius_km);
    read(j, "sources", c.sources);
    read(j, "data_centers", c.data_centers);
    if (j.contains("legacy")) {
      const auto& l = j.at("legacy");
      read(l, "count", c.legacy.count);
      read(l, "idle", c.legacy.idle);
      read(l, "slope", c.legacy.slope);
      read(l, "capacity", c.legacy.capacity);
    }
    read(j, "rate_min", c.rate_min);
    read(j, "rate_max", c.rate_max);
    if (j.contains("mode")) c.mode = RoutingMode::parse(j.at("mode").get<std::string>());
    if (j.contains("link")) {
      const auto& l = j.at("link");
      read(l, "watts_per_amplifier", c.link.watts_per_amplifier);
      read(l, "span_km", c.link.span_km);
      read(l, "terminal_amplifiers", c.link.terminal_amplifiers);
      read(l, "slope", c.link.slope);
      read(l, "capacity", c.link.capacity);
    }
    if (j.contains("dc")) {
      const auto& d = j.at("dc");
      read(d, "idle", c.dc.idle);
      read(d, "slope", c.dc.slope);
      read(d, "capacity", c.dc.capacity);
    }
    read(j, "cooling_factor", c.cooling_factor);
    read(j, "epsilon", c.epsilon);
    read(j, "eta0", c.eta0);
    read(j, "eta_exponent", c.eta_exponent);
    read(j, "noise_fraction", c.noise_fraction);
    read(j, "dt", c.dt);
    read(j, "horizon", c.horizon);
    read(j, "window", c.window);
    read(j, "burn_in_fraction", c.burn_in_fraction);
    read(j, "seed", c.seed);
    read(j, "replicates", c.replicates);
    read(j, "threads", c.threads);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open config file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse " + file.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::uint64_t scenario_hash(const ScenarioConfig& config) {
  auto j = config_to_json(config);
  j.erase("threads");  // concurrency never changes results
  return fnv1a64(j.dump());
}

EdgeCostSpec link_cost(const LinkCostParams& p, double length_km, double epsilon) {
  if (!(length_km >= 0.0)) throw ValidationError("link length must be >= 0");
  const double amplifiers = std::ceil(length_km / p.span_km) + p.terminal_amplifiers;
  return EdgeCostSpec::affine(CostKind::link, p.watts_per_amplifier * amplifiers, p.slope,
                              p.capacity, epsilon);
}

EdgeCostSpec dc_cost(double idle, double slope, double capacity, double cooling,
                     double epsilon) {
  return EdgeCostSpec::affine(CostKind::dc, idle * cooling, slope * cooling, capacity, epsilon);
}

namespace {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double dist2(const Point& a, const Point& b) {
  return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
}

std::vector<std::size_t> permutation(std::size_t n, SeededRng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

bool connected(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::size_t components = n;
  for (const auto& e : edges) {
    const auto a = find(e.u);
    const auto b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

// Fiber nodes and edges (no data centers yet).
void geometric_topology(const ScenarioConfig& c, std::vector<Node>& nodes,
                        std::vector<Edge>& edges) {
  SeededRng rng(derive_seed(c.seed, SeedStream::scenario, 0));
  std::vector<Point> pts(c.nodes);
  for (auto& p : pts) {
    p.x = rng.uniform(0.0, c.width_km);
    p.y = rng.uniform(0.0, c.height_km);
  }
  const int width = c.nodes > 100 ? 3 : 2;
  for (std::size_t i = 0; i < c.nodes; ++i) {
    std::string name = std::to_string(i);
    name.insert(0, static_cast<std::size_t>(std::max(0, width - static_cast<int>(name.size()))), '0');
    nodes.push_back(Node{"n" + name, std::nullopt, std::nullopt, false});
  }
  for (std::size_t i = 0; i < c.nodes; ++i) {
    for (std::size_t j = i + 1; j < c.nodes; ++j) {
      const double dij = dist2(pts[i], pts[j]);
      bool gabriel = true;
      for (std::size_t k = 0; k < c.nodes && gabriel; ++k) {
        if (k != i && k != j && dist2(pts[i], pts[k]) + dist2(pts[j], pts[k]) < dij) {
          gabriel = false;
        }
      }
      const double len = std::sqrt(dij);
      if (!gabriel || (c.radius_km > 0.0 && len > c.radius_km)) continue;
      edges.push_back(Edge{nodes[i].name + "-" + nodes[j].name, i, j, len, EdgeKind::fiber});
    }
  }
  if (!connected(c.nodes, edges)) {
    throw ValidationError("generated topology is disconnected; increase radius_km");
  }
}

void file_topology(const ScenarioConfig& c, std::vector<Node>& nodes, std::vector<Edge>& edges) {
  std::ifstream in(c.topology_file);
  if (!in) throw ValidationError("cannot open topology file " + c.topology_file);
  json j;
  try {
    in >> j;
    for (const auto& jn : j.at("nodes")) {
      Node n;
      n.name = jn.at("name").get<std::string>();
      if (jn.contains("lat")) n.lat = jn.at("lat").get<double>();
      if (jn.contains("lon")) n.lon = jn.at("lon").get<double>();
      if (jn.value("virtual", false)) {
        throw ValidationError("topology files list fiber nodes only");
      }
      nodes.push_back(std::move(n));
    }
    auto id = [&](const std::string& name) {
      for (NodeId i = 0; i < nodes.size(); ++i) {
        if (nodes[i].name == name) return i;
      }
      throw ValidationError("unknown node '" + name + "' in topology file");
    };
    for (const auto& je : j.at("edges")) {
      if (je.value("kind", std::string("fiber")) != "fiber") {
        throw ValidationError("topology files list fiber edges only");
      }
      edges.push_back(Edge{je.at("name").get<std::string>(), id(je.at("u").get<std::string>()),
                           id(je.at("v").get<std::string>()), je.at("length_km").get<double>(),
                           EdgeKind::fiber});
    }
  } catch (const json::exception& e) {
    throw ValidationError("malformed topology file: " + std::string(e.what()));
  }
  if (nodes.size() < 2 || !connected(nodes.size(), edges)) {
    throw ValidationError("topology file must describe a connected graph");
  }
}

}  // namespace

Scenario generate_scenario(const ScenarioConfig& c) {
  c.validate();
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  if (c.topology_file.empty()) geometric_topology(c, nodes, edges);
  else file_topology(c, nodes, edges);
  const std::size_t n = nodes.size();

  std::vector<EdgeCostSpec> costs;
  for (const auto& e : edges) costs.push_back(link_cost(c.link, e.length_km, c.epsilon));

  const std::size_t total_dcs = c.data_centers + c.legacy.count;
  if (total_dcs > n) {
    throw ValidationError("more data centers (" + std::to_string(total_dcs) + ") than nodes (" +
                          std::to_string(n) + ")");
  }
  SeededRng dc_rng(derive_seed(c.seed, SeedStream::scenario, 1));
  const auto dc_order = permutation(n, dc_rng);
  std::vector<NodeId> dcs(dc_order.begin(), dc_order.begin() + static_cast<long>(total_dcs));
  for (std::size_t i = 0; i < dcs.size(); ++i) {
    const NodeId d = dcs[i];
    const NodeId terminal = nodes.size();
    nodes.push_back(Node{nodes[d].name + "*", std::nullopt, std::nullopt, true});
    edges.push_back(Edge{nodes[d].name + "-dc", d, terminal, 0.0, EdgeKind::virtual_dc});
    const bool legacy = i >= c.data_centers;
    costs.push_back(legacy ? dc_cost(c.legacy.idle, c.legacy.slope, c.legacy.capacity,
                                     c.cooling_factor, c.epsilon)
                           : dc_cost(c.dc.idle, c.dc.slope, c.dc.capacity, c.cooling_factor,
                                     c.epsilon));
  }
  NetworkGraph graph(std::move(nodes), std::move(edges));

  SeededRng source_rng(derive_seed(c.seed, SeedStream::scenario, 2));
  SeededRng rate_rng(derive_seed(c.seed, SeedStream::scenario, 3));
  std::vector<Commodity> commodities;
  std::vector<std::size_t> pool;
  for (std::size_t s = 0; s < c.sources; ++s) {
    if (pool.empty()) {
      pool = permutation(n, source_rng);
      std::reverse(pool.begin(), pool.end());
    }
    const NodeId source = pool.back();
    pool.pop_back();
    Commodity commodity;
    commodity.source = source;
    for (NodeId d : dcs) {
      if (d != source) commodity.destinations.push_back(d);
    }
    if (commodity.destinations.empty()) {
      throw ValidationError("source " + graph.node(source).name + " is the only data center");
    }
    commodity.rate = c.rate_min == c.rate_max ? c.rate_min : rate_rng.uniform(c.rate_min, c.rate_max);
    commodities.push_back(std::move(commodity));
  }

  const std::string name = "generated-" + std::to_string(c.seed);
  return make_scenario(name, std::move(graph), std::move(commodities), std::move(costs), c.mode);
}

}  // namespace ecoroute
