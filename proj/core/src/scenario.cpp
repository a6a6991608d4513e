#include "ecoroute/scenario.hpp"

#include <fstream>

#include "ecoroute/error.hpp"

namespace ecoroute {

using nlohmann::json;

CongestionModel Scenario::model() const {
  PathLayout layout(paths, commodities);
  return CongestionModel(std::move(layout), build_incidence(paths, graph), costs);
}

double Scenario::total_rate() const {
  double total = 0.0;
  for (const auto& c : commodities) total += c.rate;
  return total;
}

std::vector<std::size_t> Scenario::path_counts() const {
  std::vector<std::size_t> counts(commodities.size(), 0);
  for (const auto& p : paths) ++counts.at(p.commodity);
  return counts;
}

namespace {

void check_costs(const NetworkGraph& graph, const std::vector<EdgeCostSpec>& costs) {
  if (costs.size() != graph.edge_count()) {
    throw DimensionError("scenario needs one cost spec per edge (" +
                         std::to_string(graph.edge_count()) + " edges, " +
                         std::to_string(costs.size()) + " specs)");
  }
}

}  // namespace

Scenario make_scenario(std::string name, NetworkGraph graph, std::vector<Commodity> commodities,
                       std::vector<EdgeCostSpec> costs, const RoutingMode& mode) {
  check_costs(graph, costs);
  if (commodities.empty()) throw ValidationError("scenario has no commodities");
  std::vector<Path> paths;
  for (CommodityId s = 0; s < commodities.size(); ++s) {
    validate_commodity(commodities[s], graph);
    auto found = enumerate_paths(graph, commodities[s], s, mode);
    paths.insert(paths.end(), std::make_move_iterator(found.begin()),
                 std::make_move_iterator(found.end()));
  }
  return Scenario{std::move(name), std::move(graph), std::move(commodities), std::move(costs),
                  std::move(paths), mode};
}

Scenario make_scenario(std::string name, NetworkGraph graph, std::vector<Commodity> commodities,
                       std::vector<EdgeCostSpec> costs, std::vector<Path> paths) {
  check_costs(graph, costs);
  if (commodities.empty()) throw ValidationError("scenario has no commodities");
  for (const auto& c : commodities) validate_commodity(c, graph);
  for (std::size_t a = 0; a < paths.size(); ++a) {
    const auto& p = paths[a];
    if (p.commodity >= commodities.size()) {
      throw ValidationError("path " + std::to_string(a) + " names an unknown commodity");
    }
    validate_path(p, commodities[p.commodity], graph, "path " + std::to_string(a));
  }
  PathLayout check(paths, commodities);  // grouping and coverage
  return Scenario{std::move(name), std::move(graph), std::move(commodities), std::move(costs),
                  std::move(paths), std::nullopt};
}

Scenario with_mode(const Scenario& scenario, const RoutingMode& mode) {
  return make_scenario(scenario.name, scenario.graph, scenario.commodities, scenario.costs,
                       mode);
}

Scenario with_epsilon(const Scenario& scenario, double epsilon) {
  Scenario out = scenario;
  for (auto& c : out.costs) {
    if (c.capacity()) c = c.with_relaxation(c.capacity(), epsilon);
  }
  return out;
}

json cost_to_json(const EdgeCostSpec& spec) {
  json j;
  if (const auto& custom = spec.custom_cost()) {
    if (const auto* pl = std::get_if<PiecewiseLinearCost>(&*custom)) {
      j = {{"type", "piecewise"}, {"breakpoints", pl->breakpoints}, {"values", pl->values}};
    } else {
      const auto& pw = std::get<PowerLawCost>(*custom);
      j = {{"type", "power"},
           {"offset", pw.offset},
           {"coefficient", pw.coefficient},
           {"exponent", pw.exponent}};
    }
  } else {
    j = {{"type", "affine"},
         {"kind", std::string(to_string(spec.kind()))},
         {"intercept", spec.intercept()},
         {"slope", spec.slope()}};
  }
  if (spec.capacity()) {
    j["capacity"] = *spec.capacity();
    j["epsilon"] = spec.epsilon();
  }
  return j;
}

EdgeCostSpec cost_from_json(const json& j) {
  std::optional<double> capacity;
  if (j.contains("capacity") && !j.at("capacity").is_null()) {
    capacity = j.at("capacity").get<double>();
  }
  const double epsilon = j.value("epsilon", kDefaultEpsilon);
  const auto type = j.value("type", std::string("affine"));
  if (type == "affine") {
    const auto kind_text = j.value("kind", std::string("link"));
    CostKind kind;
    if (kind_text == "link") kind = CostKind::link;
    else if (kind_text == "dc") kind = CostKind::dc;
    else throw ValidationError("unknown affine cost kind '" + kind_text + "'");
    return EdgeCostSpec::affine(kind, j.at("intercept").get<double>(),
                                j.at("slope").get<double>(), capacity, epsilon);
  }
  if (type == "piecewise") {
    return EdgeCostSpec::custom(
        PiecewiseLinearCost{j.at("breakpoints").get<std::vector<double>>(),
                            j.at("values").get<std::vector<double>>()},
        capacity, epsilon);
  }
  if (type == "power") {
    return EdgeCostSpec::custom(PowerLawCost{j.value("offset", 0.0), j.value("coefficient", 1.0),
                                             j.at("exponent").get<double>()},
                                capacity, epsilon);
  }
  throw ValidationError("unknown cost type '" + type + "'");
}

json scenario_to_json(const Scenario& s) {
  json nodes = json::array();
  for (const auto& n : s.graph.nodes()) {
    json jn = {{"name", n.name}};
    if (n.lat) jn["lat"] = *n.lat;
    if (n.lon) jn["lon"] = *n.lon;
    if (n.is_virtual) jn["virtual"] = true;
    nodes.push_back(std::move(jn));
  }
  json edges = json::array();
  for (EdgeId e = 0; e < s.graph.edge_count(); ++e) {
    const auto& edge = s.graph.edge(e);
    edges.push_back({{"name", edge.name},
                     {"u", s.graph.node(edge.u).name},
                     {"v", s.graph.node(edge.v).name},
                     {"length_km", edge.length_km},
                     {"kind", std::string(to_string(edge.kind))},
                     {"cost", cost_to_json(s.costs[e])}});
  }
  json commodities = json::array();
  for (const auto& c : s.commodities) {
    json dests = json::array();
    for (NodeId d : c.destinations) dests.push_back(s.graph.node(d).name);
    commodities.push_back(
        {{"source", s.graph.node(c.source).name}, {"destinations", dests}, {"rate", c.rate}});
  }
  json out = {{"schema_version", kSchemaVersion},
              {"name", s.name},
              {"nodes", nodes},
              {"edges", edges},
              {"commodities", commodities}};
  if (s.mode) {
    out["routing"] = s.mode->label();
  } else {
    json paths = json::array();
    for (const auto& p : s.paths) {
      json names = json::array();
      for (EdgeId e : p.edges) names.push_back(s.graph.edge(e).name);
      paths.push_back({{"commodity", p.commodity}, {"edges", names}});
    }
    out["paths"] = paths;
  }
  return out;
}

Scenario scenario_from_json(const json& j) {
  try {
    const int version = j.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion) {
      throw ValidationError("unsupported scenario schema_version " + std::to_string(version));
    }
    std::vector<Node> nodes;
    for (const auto& jn : j.at("nodes")) {
      Node n;
      n.name = jn.at("name").get<std::string>();
      if (jn.contains("lat")) n.lat = jn.at("lat").get<double>();
      if (jn.contains("lon")) n.lon = jn.at("lon").get<double>();
      n.is_virtual = jn.value("virtual", false);
      nodes.push_back(std::move(n));
    }
    auto node_id = [&](const std::string& name) {
      for (NodeId i = 0; i < nodes.size(); ++i) {
        if (nodes[i].name == name) return i;
      }
      throw ValidationError("unknown node '" + name + "'");
    };
    std::vector<Edge> edges;
    std::vector<EdgeCostSpec> costs;
    for (const auto& je : j.at("edges")) {
      Edge e;
      e.name = je.at("name").get<std::string>();
      e.u = node_id(je.at("u").get<std::string>());
      e.v = node_id(je.at("v").get<std::string>());
      e.length_km = je.value("length_km", 0.0);
      e.kind = edge_kind_from_string(je.value("kind", std::string("fiber")));
      edges.push_back(std::move(e));
      costs.push_back(je.contains("cost") ? cost_from_json(je.at("cost"))
                                          : EdgeCostSpec::free_edge());
    }
    NetworkGraph graph(std::move(nodes), std::move(edges));
    std::vector<Commodity> commodities;
    for (const auto& jc : j.at("commodities")) {
      Commodity c;
      const auto source = jc.at("source").get<std::string>();
      c.source = graph.find_node(source).value_or(graph.node_count());
      if (c.source == graph.node_count()) throw ValidationError("unknown node '" + source + "'");
      for (const auto& d : jc.at("destinations")) {
        const auto name = d.get<std::string>();
        const auto id = graph.find_node(name);
        if (!id) throw ValidationError("unknown node '" + name + "'");
        c.destinations.push_back(*id);
      }
      c.rate = jc.at("rate").get<double>();
      commodities.push_back(std::move(c));
    }
    const auto name = j.value("name", std::string("scenario"));
    if (j.contains("paths")) {
      std::vector<Path> paths;
      for (const auto& jp : j.at("paths")) {
        Path p;
        p.commodity = jp.at("commodity").get<CommodityId>();
        for (const auto& en : jp.at("edges")) {
          const auto edge_name = en.get<std::string>();
          const auto id = graph.find_edge(edge_name);
          if (!id) throw ValidationError("unknown edge '" + edge_name + "'");
          p.edges.push_back(*id);
        }
        paths.push_back(std::move(p));
      }
      return make_scenario(name, std::move(graph), std::move(commodities), std::move(costs),
                           std::move(paths));
    }
    const auto mode = RoutingMode::parse(j.value("routing", std::string("single")));
    return make_scenario(name, std::move(graph), std::move(commodities), std::move(costs), mode);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed scenario JSON: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open scenario file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse " + file.string() + ": " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ValidationError("cannot write " + file.string());
  out << scenario_to_json(scenario).dump(2) << '\n';
}

}  // namespace ecoroute
