#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecoroute/topology.hpp"

namespace ecoroute {

struct RoutingMode {
  enum class Kind { single_shortest, k_shortest, m_closest, mixed };

  Kind kind = Kind::single_shortest;
  int k = 1;  // loop-free paths per destination
  int m = 1;  // destinations per source

  static RoutingMode single() { return {Kind::single_shortest, 1, 1}; }
  static RoutingMode k_shortest(int k) { return {Kind::k_shortest, k, 1}; }
  static RoutingMode m_closest(int m) { return {Kind::m_closest, 1, m}; }
  static RoutingMode mixed(int k, int m) { return {Kind::mixed, k, m}; }

  // "single", "k-shortest:4", "m-closest:5", "mixed:4x5"
  std::string label() const;
  static RoutingMode parse(const std::string& text);

  friend bool operator==(const RoutingMode&, const RoutingMode&) = default;
};

// Ordering key for candidate routes: hop count, then total length, then the
// edge-id sequence.
struct RouteKey {
  std::size_t hops = 0;
  double length_km = 0.0;
  std::vector<EdgeId> edges;

  friend bool operator<(const RouteKey& a, const RouteKey& b) {
    if (a.hops != b.hops) return a.hops < b.hops;
    if (a.length_km != b.length_km) return a.length_km < b.length_km;
    return a.edges < b.edges;
  }
  friend bool operator==(const RouteKey&, const RouteKey&) = default;
};

// Best fiber route from `from` to `to`, avoiding the given edges and nodes.
// Virtual-dc edges are never traversed.
std::optional<RouteKey> shortest_route(const NetworkGraph& graph, NodeId from, NodeId to,
                                       const std::set<EdgeId>& banned_edges = {},
                                       const std::set<NodeId>& banned_nodes = {});

// Up to k loop-free fiber routes in RouteKey order (Yen's algorithm).
std::vector<RouteKey> k_shortest_routes(const NetworkGraph& graph, NodeId from, NodeId to,
                                        int k);

/// Candidate anycast paths for one commodity. Every path ends with the
/// destination's virtual-dc edge. Destinations are ranked by their best
/// route key; fewer paths come back when the graph cannot supply them.
/// Throws ValidationError if no destination is reachable.
std::vector<Path> enumerate_paths(const NetworkGraph& graph, const Commodity& commodity,
                                  CommodityId id, const RoutingMode& mode);

}  // namespace ecoroute
