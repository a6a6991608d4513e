#include "ecoroute/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "ecoroute/error.hpp"

namespace ecoroute {

std::string_view to_string(EdgeKind kind) {
  return kind == EdgeKind::fiber ? "fiber" : "virtual-dc";
}

EdgeKind edge_kind_from_string(std::string_view text) {
  if (text == "fiber") return EdgeKind::fiber;
  if (text == "virtual-dc" || text == "virtual_dc") return EdgeKind::virtual_dc;
  throw ValidationError("unknown edge kind '" + std::string(text) + "'");
}

NetworkGraph::NetworkGraph(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  adjacency_.resize(nodes_.size());
  dc_edge_.resize(nodes_.size());

  for (NodeId n = 0; n < nodes_.size(); ++n) {
    if (!node_index_.emplace(nodes_[n].name, n).second) {
      throw ValidationError("duplicate node id '" + nodes_[n].name + "'");
    }
  }
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    if (!edge_index_.emplace(edge.name, e).second) {
      throw ValidationError("duplicate edge id '" + edge.name + "'");
    }
    if (edge.u >= nodes_.size() || edge.v >= nodes_.size()) {
      throw ValidationError("edge '" + edge.name + "' references a missing node");
    }
    if (edge.u == edge.v) {
      throw ValidationError("edge '" + edge.name + "' is a self loop");
    }
    if (!(edge.length_km >= 0.0) || !std::isfinite(edge.length_km)) {
      throw ValidationError("edge '" + edge.name + "' has an invalid length");
    }
    adjacency_[edge.u].push_back(e);
    adjacency_[edge.v].push_back(e);
  }

  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    const bool u_virtual = nodes_[edge.u].is_virtual;
    const bool v_virtual = nodes_[edge.v].is_virtual;
    if (edge.kind == EdgeKind::virtual_dc) {
      if (u_virtual == v_virtual) {
        throw ValidationError("virtual-dc edge '" + edge.name +
                              "' must join exactly one data center to one virtual node");
      }
      const NodeId dc = u_virtual ? edge.v : edge.u;
      if (dc_edge_[dc]) {
        throw ValidationError("data center '" + nodes_[dc].name +
                              "' has more than one virtual-dc edge");
      }
      dc_edge_[dc] = e;
    } else if (u_virtual || v_virtual) {
      throw ValidationError("fiber edge '" + edge.name + "' touches a virtual node");
    }
  }
  for (NodeId n = 0; n < nodes_.size(); ++n) {
    if (nodes_[n].is_virtual && adjacency_[n].size() != 1) {
      throw ValidationError("virtual node '" + nodes_[n].name +
                            "' must have exactly one (virtual-dc) edge");
    }
  }
}

std::optional<NodeId> NetworkGraph::find_node(std::string_view name) const {
  auto it = node_index_.find(std::string(name));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> NetworkGraph::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> NetworkGraph::dc_edge(NodeId n) const { return dc_edge_.at(n); }

void validate_commodity(const Commodity& commodity, const NetworkGraph& graph) {
  if (!(commodity.rate > 0.0) || !std::isfinite(commodity.rate)) {
    throw ValidationError("commodity rate must be positive");
  }
  if (commodity.source >= graph.node_count()) {
    throw ValidationError("commodity source is not a node of the graph");
  }
  if (graph.node(commodity.source).is_virtual) {
    throw ValidationError("commodity source is a virtual node");
  }
  if (commodity.destinations.empty()) {
    throw ValidationError("commodity has no destinations");
  }
  for (NodeId d : commodity.destinations) {
    if (d >= graph.node_count()) {
      throw ValidationError("commodity destination is not a node of the graph");
    }
    if (d == commodity.source) {
      throw ValidationError("commodity source '" + graph.node(d).name +
                            "' is listed among its own destinations");
    }
    if (!graph.is_data_center(d)) {
      throw ValidationError("destination '" + graph.node(d).name +
                            "' has no virtual-dc edge");
    }
  }
}

void validate_path_chain(const Path& path, const NetworkGraph& graph,
                         std::string_view label) {
  auto fail = [&](const std::string& why) {
    throw ValidationError("path " + std::string(label) + ": " + why);
  };
  if (path.edges.empty()) fail("path has no edges");
  std::unordered_set<EdgeId> seen;
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    const EdgeId e = path.edges[i];
    if (e >= graph.edge_count()) fail("edge index " + std::to_string(e) + " out of range");
    if (!seen.insert(e).second) fail("edge '" + graph.edge(e).name + "' repeats");
    if (i > 0) {
      const Edge& prev = graph.edge(path.edges[i - 1]);
      const Edge& cur = graph.edge(e);
      if (!cur.touches(prev.u) && !cur.touches(prev.v)) {
        fail("broken edge chain between '" + prev.name + "' and '" + cur.name + "'");
      }
    }
  }
}

namespace {

// Walks the chain from `start`, returning the visited node sequence or an
// empty vector if the chain does not continue from the current node.
std::vector<NodeId> walk(const Path& path, const NetworkGraph& graph, NodeId start) {
  std::vector<NodeId> nodes{start};
  NodeId at = start;
  for (EdgeId e : path.edges) {
    const Edge& edge = graph.edge(e);
    if (!edge.touches(at)) return {};
    at = edge.other(at);
    nodes.push_back(at);
  }
  return nodes;
}

}  // namespace

void validate_path(const Path& path, const Commodity& commodity,
                   const NetworkGraph& graph, std::string_view label) {
  validate_path_chain(path, graph, label);
  auto fail = [&](const std::string& why) {
    throw ValidationError("path " + std::string(label) + ": " + why);
  };
  const auto nodes = walk(path, graph, commodity.source);
  if (nodes.empty()) fail("does not start at the commodity source");
  std::unordered_set<NodeId> visited(nodes.begin(), nodes.end());
  if (visited.size() != nodes.size()) fail("visits a node twice");

  const Edge& last = graph.edge(path.edges.back());
  if (last.kind != EdgeKind::virtual_dc) fail("does not end with a virtual-dc edge");
  const NodeId dc = nodes[nodes.size() - 2];
  if (std::find(commodity.destinations.begin(), commodity.destinations.end(), dc) ==
      commodity.destinations.end()) {
    fail("ends at '" + graph.node(dc).name + "', which is not a destination");
  }
  for (std::size_t i = 0; i + 1 < path.edges.size(); ++i) {
    if (graph.edge(path.edges[i]).kind == EdgeKind::virtual_dc) {
      fail("uses a virtual-dc edge before its last hop");
    }
  }
}

NodeId path_destination(const Path& path, const NetworkGraph& graph) {
  if (path.edges.empty()) throw ValidationError("empty path has no destination");
  const Edge& last = graph.edge(path.edges.back());
  if (last.kind != EdgeKind::virtual_dc) {
    throw ValidationError("path does not end with a virtual-dc edge");
  }
  return graph.node(last.u).is_virtual ? last.v : last.u;
}

PathLayout::PathLayout(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  for (CommodityId s = 0; s < blocks_.size(); ++s) {
    const Block& b = blocks_[s];
    if (b.first != path_count_) throw DimensionError("path blocks must be contiguous");
    if (b.count == 0) throw ValidationError("commodity without candidate paths");
    if (!(b.rate > 0.0)) throw ValidationError("commodity rate must be positive");
    path_count_ += b.count;
    owner_.insert(owner_.end(), b.count, s);
  }
}

namespace {

std::vector<PathLayout::Block> blocks_from(std::span<const Path> paths,
                                           std::span<const Commodity> commodities) {
  std::vector<PathLayout::Block> blocks(commodities.size());
  for (CommodityId s = 0; s < commodities.size(); ++s) blocks[s].rate = commodities[s].rate;
  CommodityId expected = 0;
  for (PathId a = 0; a < paths.size(); ++a) {
    const CommodityId s = paths[a].commodity;
    if (s >= commodities.size()) throw ValidationError("path refers to an unknown commodity");
    if (s < expected) throw ValidationError("paths must be grouped by commodity");
    if (s != expected || blocks[s].count == 0) blocks[s].first = a;
    expected = s;
    ++blocks[s].count;
  }
  for (CommodityId s = 0; s < blocks.size(); ++s) {
    if (blocks[s].count == 0) {
      throw ValidationError("commodity " + std::to_string(s) + " has no candidate paths");
    }
  }
  return blocks;
}

}  // namespace

PathLayout::PathLayout(std::span<const Path> paths, std::span<const Commodity> commodities)
    : PathLayout(blocks_from(paths, commodities)) {}

double PathLayout::total_rate() const {
  return std::accumulate(blocks_.begin(), blocks_.end(), 0.0,
                         [](double acc, const Block& b) { return acc + b.rate; });
}

IncidenceMatrix::IncidenceMatrix(std::size_t edge_count,
                                 std::vector<std::vector<EdgeId>> columns)
    : columns_(std::move(columns)), rows_(edge_count) {
  for (PathId a = 0; a < columns_.size(); ++a) {
    auto& col = columns_[a];
    for (EdgeId e : col) {
      if (e >= edge_count) throw DimensionError("incidence column references a missing edge");
    }
    std::vector<EdgeId> sorted = col;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("path " + std::to_string(a) + " lists an edge twice");
    }
    for (EdgeId e : col) rows_[e].push_back(a);
  }
}

int IncidenceMatrix::operator()(EdgeId e, PathId a) const {
  const auto& col = columns_.at(a);
  if (e >= rows_.size()) throw DimensionError("edge index out of range");
  return std::find(col.begin(), col.end(), e) != col.end() ? 1 : 0;
}

std::vector<std::vector<int>> IncidenceMatrix::dense() const {
  std::vector<std::vector<int>> m(edge_count(), std::vector<int>(path_count(), 0));
  for (PathId a = 0; a < columns_.size(); ++a) {
    for (EdgeId e : columns_[a]) m[e][a] = 1;
  }
  return m;
}

IncidenceMatrix build_incidence(std::span<const Path> paths, const NetworkGraph& graph) {
  std::vector<std::vector<EdgeId>> columns;
  columns.reserve(paths.size());
  for (PathId a = 0; a < paths.size(); ++a) {
    validate_path_chain(paths[a], graph, "#" + std::to_string(a));
    columns.push_back(paths[a].edges);
  }
  return IncidenceMatrix(graph.edge_count(), std::move(columns));
}

void compute_loads_into(std::span<const double> x, const IncidenceMatrix& incidence,
                        std::span<double> loads) {
  if (x.size() != incidence.path_count() || loads.size() != incidence.edge_count()) {
    throw DimensionError("flow/load sizes do not match the incidence matrix");
  }
  std::fill(loads.begin(), loads.end(), 0.0);
  for (PathId a = 0; a < x.size(); ++a) {
    for (EdgeId e : incidence.path_edges(a)) loads[e] += x[a];
  }
}

LoadVector compute_loads(const FlowState& x, const IncidenceMatrix& incidence) {
  LoadVector w{std::vector<double>(incidence.edge_count(), 0.0)};
  compute_loads_into(x.values, incidence, w.values);
  return w;
}

StateValidation validate_state(const FlowState& x, const PathLayout& layout, double rel_tol) {
  if (x.values.size() != layout.path_count()) {
    throw DimensionError("flow state size does not match the path layout");
  }
  StateValidation report;
  for (CommodityId s = 0; s < layout.commodity_count(); ++s) {
    const auto& b = layout.block(s);
    double sum = 0.0;
    for (PathId a = b.first; a < b.first + b.count; ++a) {
      const double xa = x.values[a];
      if (!(xa >= 0.0)) {
        report.violations.push_back({SimplexViolation::Kind::negative_flow, s, a, xa});
      }
      sum += xa;
    }
    const double residual = sum - b.rate;
    if (!(std::abs(residual) <= rel_tol * b.rate)) {
      report.violations.push_back(
          {SimplexViolation::Kind::rate_mismatch, s, std::nullopt, residual});
    }
  }
  return report;
}

}  // namespace ecoroute
