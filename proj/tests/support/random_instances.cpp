#include "random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace ecoroute::testing {

EdgeCostSpec random_cost(SeededRng& rng, bool smooth_only) {
  const std::size_t kind = rng.below(smooth_only ? 2 : 4);
  switch (kind) {
    case 0:
      return EdgeCostSpec::affine(CostKind::link, rng.uniform(0.0, 5.0), rng.uniform(0.1, 4.0));
    case 1:
      return EdgeCostSpec::custom(
          PowerLawCost{rng.uniform(0.0, 2.0), rng.uniform(0.2, 2.0), rng.uniform(1.0, 3.0)});
    case 2:
      return EdgeCostSpec::affine(CostKind::dc, rng.uniform(0.0, 5.0), rng.uniform(0.1, 4.0),
                                  rng.uniform(0.5, 3.0), std::pow(10.0, -rng.uniform(1.0, 4.0)));
    default: {
      PiecewiseLinearCost p;
      double w = 0.0;
      double c = rng.uniform(0.0, 3.0);
      double slope = rng.uniform(0.1, 1.0);
      p.breakpoints.push_back(w);
      p.values.push_back(c);
      for (int i = 0; i < 3; ++i) {
        const double step = rng.uniform(0.2, 1.5);
        w += step;
        c += slope * step;
        slope += rng.uniform(0.0, 2.0);
        p.breakpoints.push_back(w);
        p.values.push_back(c);
      }
      return EdgeCostSpec::custom(p);
    }
  }
}

Scenario random_instance(SeededRng& rng, const RandomInstanceOptions& options) {
  const std::size_t n = 3 + rng.below(options.max_fiber_nodes - 2);
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(Node{"n" + std::to_string(i), {}, {}, false});
  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> used;
  auto add_link = [&](NodeId u, NodeId v) {
    if (u == v || !used.insert({std::min(u, v), std::max(u, v)}).second) return;
    edges.push_back(Edge{"n" + std::to_string(u) + "-n" + std::to_string(v), u, v,
                         rng.uniform(10.0, 500.0), EdgeKind::fiber});
  };
  for (NodeId v = 1; v < n; ++v) add_link(rng.below(v), v);
  const std::size_t extra = rng.below(n);
  for (std::size_t i = 0; i < extra; ++i) add_link(rng.below(n), rng.below(n));

  // Data centers are the highest-numbered nodes, sources the lowest.
  const std::size_t dcs = 1 + rng.below(std::min<std::size_t>(2, n - 1));
  std::vector<NodeId> dc_nodes;
  for (std::size_t i = 0; i < dcs; ++i) {
    const NodeId d = n - 1 - i;
    dc_nodes.push_back(d);
    const NodeId terminal = nodes.size();
    nodes.push_back(Node{nodes[d].name + "*", {}, {}, true});
    edges.push_back(Edge{nodes[d].name + "-dc", d, terminal, 0.0, EdgeKind::virtual_dc});
  }
  std::vector<EdgeCostSpec> costs;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    costs.push_back(random_cost(rng, options.smooth_costs));
  }

  const std::size_t sources =
      1 + rng.below(std::min(options.max_commodities, n - dcs));
  std::vector<Commodity> commodities;
  for (std::size_t s = 0; s < sources; ++s) {
    commodities.push_back(Commodity{s, dc_nodes, rng.uniform(0.5, 2.0)});
  }
  NetworkGraph graph(std::move(nodes), std::move(edges));

  std::vector<Path> paths;
  for (std::size_t s = 0; s < commodities.size(); ++s) {
    auto ps = enumerate_paths(graph, commodities[s], s, RoutingMode::mixed(2, 2));
    const std::size_t room = options.max_paths - paths.size() - (commodities.size() - s - 1);
    if (ps.size() > room) ps.resize(room);
    paths.insert(paths.end(), ps.begin(), ps.end());
  }
  return make_scenario("random", std::move(graph), std::move(commodities), std::move(costs),
                       std::move(paths));
}

FlowState random_flow(SeededRng& rng, const PathLayout& layout, double floor) {
  FlowState x{std::vector<double>(layout.path_count())};
  for (const auto& b : layout.blocks()) {
    double sum = 0.0;
    for (std::size_t a = b.first; a < b.first + b.count; ++a) {
      x.values[a] = -std::log(1.0 - rng.uniform());  // flat Dirichlet
      sum += x.values[a];
    }
    const double free = 1.0 - floor * static_cast<double>(b.count);
    for (std::size_t a = b.first; a < b.first + b.count; ++a) {
      x.values[a] = b.rate * (floor + free * x.values[a] / sum);
    }
  }
  return x;
}

}  // namespace ecoroute::testing
