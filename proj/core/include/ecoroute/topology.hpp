#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ecoroute {

using NodeId = std::size_t;
using EdgeId = std::size_t;
using PathId = std::size_t;
using CommodityId = std::size_t;

enum class EdgeKind { fiber, virtual_dc };

std::string_view to_string(EdgeKind kind);
EdgeKind edge_kind_from_string(std::string_view text);

struct Node {
  std::string name;
  std::optional<double> lat;
  std::optional<double> lon;
  // Terminal node hanging off a data center through a virtual-dc edge.
  bool is_virtual = false;
};

struct Edge {
  std::string name;
  NodeId u = 0;
  NodeId v = 0;
  double length_km = 0.0;
  EdgeKind kind = EdgeKind::fiber;

  bool touches(NodeId n) const { return u == n || v == n; }
  NodeId other(NodeId n) const { return n == u ? v : u; }
};

/// Undirected network graph. Data centers are ordinary nodes that own a
/// virtual-dc edge leading to a dedicated virtual node; the load on that
/// edge is the data center's load.
///
/// Immutable after construction. The constructor checks endpoints,
/// duplicate names and the virtual-dc attachment rule, and throws
/// ValidationError on any violation.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  NetworkGraph(std::vector<Node> nodes, std::vector<Edge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  const Edge& edge(EdgeId id) const { return edges_.at(id); }

  std::span<const EdgeId> incident(NodeId n) const { return adjacency_.at(n); }

  std::optional<NodeId> find_node(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::string_view name) const;

  // The virtual-dc edge attached to `n`, if `n` is a data center.
  std::optional<EdgeId> dc_edge(NodeId n) const;
  bool is_data_center(NodeId n) const { return dc_edge(n).has_value(); }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
  std::vector<std::optional<EdgeId>> dc_edge_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
};

struct Commodity {
  NodeId source = 0;
  std::vector<NodeId> destinations;
  double rate = 0.0;  // Gb/s
};

// Throws ValidationError unless rate > 0, destinations are nonempty data
// centers of `graph`, and the source is not one of them.
void validate_commodity(const Commodity& commodity, const NetworkGraph& graph);

struct Path {
  CommodityId commodity = 0;
  std::vector<EdgeId> edges;
};

// Edge chain check only: edges exist, consecutive edges share a node and
// no edge repeats. Throws ValidationError naming `label`.
void validate_path_chain(const Path& path, const NetworkGraph& graph,
                         std::string_view label);

// Full anycast path check: chain starts at the commodity's source and ends
// with the virtual-dc edge of one of its destinations, visiting no node
// twice.
void validate_path(const Path& path, const Commodity& commodity,
                   const NetworkGraph& graph, std::string_view label);

// Destination data center reached by an anycast path.
NodeId path_destination(const Path& path, const NetworkGraph& graph);

/// Contiguous per-commodity ranges over a flat path index space. Paths of
/// commodity s occupy [first, first + count).
class PathLayout {
 public:
  struct Block {
    std::size_t first = 0;
    std::size_t count = 0;
    double rate = 0.0;
  };

  PathLayout() = default;
  explicit PathLayout(std::vector<Block> blocks);
  // Paths must be sorted by commodity and every commodity needs at least
  // one path.
  PathLayout(std::span<const Path> paths, std::span<const Commodity> commodities);

  std::size_t path_count() const { return path_count_; }
  std::size_t commodity_count() const { return blocks_.size(); }
  std::span<const Block> blocks() const { return blocks_; }
  const Block& block(CommodityId s) const { return blocks_.at(s); }
  CommodityId commodity_of(PathId a) const { return owner_.at(a); }
  double total_rate() const;

 private:
  std::vector<Block> blocks_;
  std::vector<CommodityId> owner_;
  std::size_t path_count_ = 0;
};

struct FlowState {
  std::vector<double> values;  // x_α in Gb/s
};

struct ScoreState {
  std::vector<double> values;  // y_α, cumulative (normalized) price
  double time = 0.0;
};

struct LoadVector {
  std::vector<double> values;  // w_e in Gb/s
};

/// 0/1 edge-by-path incidence matrix, stored sparsely in both orientations.
class IncidenceMatrix {
 public:
  IncidenceMatrix() = default;
  IncidenceMatrix(std::size_t edge_count, std::vector<std::vector<EdgeId>> columns);

  std::size_t edge_count() const { return rows_.size(); }
  std::size_t path_count() const { return columns_.size(); }

  int operator()(EdgeId e, PathId a) const;
  std::span<const EdgeId> path_edges(PathId a) const { return columns_.at(a); }
  std::span<const PathId> edge_paths(EdgeId e) const { return rows_.at(e); }

  std::vector<std::vector<int>> dense() const;

 private:
  std::vector<std::vector<EdgeId>> columns_;
  std::vector<std::vector<PathId>> rows_;
};

IncidenceMatrix build_incidence(std::span<const Path> paths, const NetworkGraph& graph);

LoadVector compute_loads(const FlowState& x, const IncidenceMatrix& incidence);
void compute_loads_into(std::span<const double> x, const IncidenceMatrix& incidence,
                        std::span<double> loads);

struct SimplexViolation {
  enum class Kind { negative_flow, rate_mismatch };
  Kind kind = Kind::negative_flow;
  CommodityId commodity = 0;
  std::optional<PathId> path;
  double residual = 0.0;  // x_α for negative flows, Σx − ρ for mismatches
};

struct StateValidation {
  std::vector<SimplexViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Reports every violated simplex constraint. Rate sums are checked to
// `rel_tol`·ρ_s.
StateValidation validate_state(const FlowState& x, const PathLayout& layout,
                               double rel_tol = 1e-9);

}  // namespace ecoroute
