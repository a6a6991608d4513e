#include "ecoroute/routing.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "ecoroute/error.hpp"

namespace ecoroute {

std::string RoutingMode::label() const {
  switch (kind) {
    case Kind::single_shortest:
      return "single";
    case Kind::k_shortest:
      return "k-shortest:" + std::to_string(k);
    case Kind::m_closest:
      return "m-closest:" + std::to_string(m);
    case Kind::mixed:
      return "mixed:" + std::to_string(k) + "x" + std::to_string(m);
  }
  return "unknown";
}

RoutingMode RoutingMode::parse(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || value < 1) {
      throw ValidationError("bad routing mode '" + text + "'");
    }
    return value;
  };
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "single" && tail.empty()) return single();
  if (head == "k-shortest") return k_shortest(number(tail));
  if (head == "m-closest") return m_closest(number(tail));
  if (head == "mixed") {
    const auto x = tail.find('x');
    if (x == std::string::npos) throw ValidationError("bad routing mode '" + text + "'");
    return mixed(number(tail.substr(0, x)), number(tail.substr(x + 1)));
  }
  throw ValidationError("bad routing mode '" + text + "'");
}

std::optional<RouteKey> shortest_route(const NetworkGraph& graph, NodeId from, NodeId to,
                                       const std::set<EdgeId>& banned_edges,
                                       const std::set<NodeId>& banned_nodes) {
  const std::size_t n = graph.node_count();
  std::vector<std::optional<RouteKey>> best(n);
  std::vector<bool> done(n, false);
  if (banned_nodes.count(from)) return std::nullopt;
  best[from] = RouteKey{};

  // Graphs here are small; an O(V^2) selection keeps the full-key ordering
  // simple.
  for (;;) {
    std::optional<NodeId> pick;
    for (NodeId v = 0; v < n; ++v) {
      if (done[v] || !best[v]) continue;
      if (!pick || *best[v] < *best[*pick]) pick = v;
    }
    if (!pick) break;
    const NodeId u = *pick;
    if (u == to) return best[u];
    done[u] = true;
    for (EdgeId e : graph.incident(u)) {
      const Edge& edge = graph.edge(e);
      if (edge.kind != EdgeKind::fiber || banned_edges.count(e)) continue;
      const NodeId v = edge.other(u);
      if (done[v] || banned_nodes.count(v)) continue;
      RouteKey candidate = *best[u];
      candidate.hops += 1;
      candidate.length_km += edge.length_km;
      candidate.edges.push_back(e);
      if (!best[v] || candidate < *best[v]) best[v] = std::move(candidate);
    }
  }
  return std::nullopt;
}

namespace {

std::vector<NodeId> route_nodes(const NetworkGraph& graph, NodeId from,
                                const std::vector<EdgeId>& edges) {
  std::vector<NodeId> nodes{from};
  for (EdgeId e : edges) nodes.push_back(graph.edge(e).other(nodes.back()));
  return nodes;
}

}  // namespace

std::vector<RouteKey> k_shortest_routes(const NetworkGraph& graph, NodeId from, NodeId to,
                                        int k) {
  std::vector<RouteKey> accepted;
  if (k < 1) return accepted;
  auto first = shortest_route(graph, from, to);
  if (!first) return accepted;
  accepted.push_back(std::move(*first));

  std::set<RouteKey> candidates;
  while (static_cast<int>(accepted.size()) < k) {
    const RouteKey& last = accepted.back();
    const auto last_nodes = route_nodes(graph, from, last.edges);
    for (std::size_t i = 0; i < last.edges.size(); ++i) {
      const NodeId spur = last_nodes[i];
      const std::vector<EdgeId> root(last.edges.begin(), last.edges.begin() + i);

      std::set<EdgeId> banned_edges;
      for (const RouteKey& p : accepted) {
        if (p.edges.size() > i && std::equal(root.begin(), root.end(), p.edges.begin())) {
          banned_edges.insert(p.edges[i]);
        }
      }
      std::set<NodeId> banned_nodes(last_nodes.begin(), last_nodes.begin() + i);

      auto spur_route = shortest_route(graph, spur, to, banned_edges, banned_nodes);
      if (!spur_route) continue;

      RouteKey total;
      total.edges = root;
      total.edges.insert(total.edges.end(), spur_route->edges.begin(), spur_route->edges.end());
      total.hops = total.edges.size();
      for (EdgeId e : total.edges) total.length_km += graph.edge(e).length_km;
      const bool known = std::any_of(accepted.begin(), accepted.end(),
                                     [&](const RouteKey& p) { return p.edges == total.edges; });
      if (!known) candidates.insert(std::move(total));
    }
    if (candidates.empty()) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return accepted;
}

std::vector<Path> enumerate_paths(const NetworkGraph& graph, const Commodity& commodity,
                                  CommodityId id, const RoutingMode& mode) {
  validate_commodity(commodity, graph);
  if (mode.k < 1 || mode.m < 1) throw ValidationError("routing mode needs k, m >= 1");

  std::vector<std::pair<RouteKey, NodeId>> ranked;
  for (NodeId d : commodity.destinations) {
    if (auto r = shortest_route(graph, commodity.source, d)) ranked.emplace_back(*r, d);
  }
  if (ranked.empty()) {
    throw ValidationError("no destination reachable from source '" +
                          graph.node(commodity.source).name + "'");
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first == b.first) return a.second < b.second;
    return a.first < b.first;
  });

  int destinations = 1;
  int per_destination = 1;
  switch (mode.kind) {
    case RoutingMode::Kind::single_shortest:
      break;
    case RoutingMode::Kind::k_shortest:
      per_destination = mode.k;
      break;
    case RoutingMode::Kind::m_closest:
      destinations = mode.m;
      break;
    case RoutingMode::Kind::mixed:
      per_destination = mode.k;
      destinations = mode.m;
      break;
  }
  destinations = std::min<int>(destinations, static_cast<int>(ranked.size()));

  std::vector<Path> paths;
  for (int j = 0; j < destinations; ++j) {
    const NodeId d = ranked[j].second;
    const EdgeId terminal = *graph.dc_edge(d);
    std::vector<RouteKey> routes;
    if (per_destination == 1) {
      routes.push_back(ranked[j].first);
    } else {
      routes = k_shortest_routes(graph, commodity.source, d, per_destination);
    }
    for (auto& r : routes) {
      Path p{id, std::move(r.edges)};
      p.edges.push_back(terminal);
      paths.push_back(std::move(p));
    }
  }
  return paths;
}

}  // namespace ecoroute
