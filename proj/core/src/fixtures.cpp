#include "ecoroute/fixtures.hpp"

#include <map>
#include <string>

namespace ecoroute::fixtures {

namespace {

// Small named-graph builder for hand-made instances.
class Builder {
 public:
  NodeId node(const std::string& name, bool is_virtual = false) {
    if (auto it = ids_.find(name); it != ids_.end()) return it->second;
    const NodeId id = nodes_.size();
    nodes_.push_back(Node{name, std::nullopt, std::nullopt, is_virtual});
    ids_.emplace(name, id);
    return id;
  }

  EdgeId link(const std::string& u, const std::string& v, EdgeCostSpec cost,
              double length_km = 100.0) {
    const EdgeId id = edges_.size();
    edges_.push_back(Edge{u + "-" + v, node(u), node(v), length_km, EdgeKind::fiber});
    costs_.push_back(std::move(cost));
    return id;
  }

  // Makes `dc` a data center; its virtual-dc edge costs `cost`.
  EdgeId data_center(const std::string& dc, EdgeCostSpec cost = dc_free()) {
    const EdgeId id = edges_.size();
    const std::string terminal = dc + "*";
    edges_.push_back(Edge{dc + "-dc", node(dc), node(terminal, true), 0.0, EdgeKind::virtual_dc});
    costs_.push_back(std::move(cost));
    return id;
  }

  NodeId id(const std::string& name) const { return ids_.at(name); }

  Scenario build(std::string name, std::vector<Commodity> commodities, std::vector<Path> paths) {
    return make_scenario(std::move(name), NetworkGraph(nodes_, edges_), std::move(commodities),
                         costs_, std::move(paths));
  }

  static EdgeCostSpec dc_free() { return EdgeCostSpec::affine(CostKind::dc, 0.0, 0.0); }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<EdgeCostSpec> costs_;
  std::map<std::string, NodeId> ids_;
};

EdgeCostSpec linear(double slope) { return EdgeCostSpec::affine(CostKind::link, 0.0, slope); }

EdgeCostSpec quadratic() { return EdgeCostSpec::custom(PowerLawCost{0.0, 1.0, 2.0}); }

Scenario two_links(std::string name, EdgeCostSpec first, EdgeCostSpec second) {
  Builder b;
  const EdgeId e1 = b.link("s", "d1", std::move(first));
  const EdgeId e2 = b.link("s", "d2", std::move(second));
  const EdgeId v1 = b.data_center("d1");
  const EdgeId v2 = b.data_center("d2");
  std::vector<Commodity> commodities{{b.id("s"), {b.id("d1"), b.id("d2")}, 1.0}};
  return b.build(std::move(name), std::move(commodities), {{0, {e1, v1}}, {0, {e2, v2}}});
}

}  // namespace

Scenario interior() { return two_links("interior", quadratic(), linear(1.0)); }

Scenario strict() { return two_links("strict", linear(1.0), linear(2.0)); }

Scenario parallel_links() { return two_links("parallel-links", quadratic(), quadratic()); }

Scenario shared_hub() {
  Builder b;
  const EdgeId am = b.link("a", "m", linear(0.0));
  const EdgeId bm = b.link("b", "m", linear(0.0));
  const EdgeId m1 = b.link("m", "d1", quadratic());
  const EdgeId m2 = b.link("m", "d2", quadratic());
  const EdgeId v1 = b.data_center("d1");
  const EdgeId v2 = b.data_center("d2");
  const std::vector<NodeId> dcs{b.id("d1"), b.id("d2")};
  return b.build("shared-hub", {{b.id("a"), dcs, 1.0}, {b.id("b"), dcs, 1.0}},
                 {{0, {am, m1, v1}}, {0, {am, m2, v2}}, {1, {bm, m1, v1}}, {1, {bm, m2, v2}}});
}

Scenario shared_edge() {
  Builder b;
  const EdgeId sh = b.link("s", "h", EdgeCostSpec::custom(PowerLawCost{0.0, 0.5, 2.0}));
  const EdgeId h1 = b.link("h", "d1", linear(0.5));
  const EdgeId h2 = b.link("h", "d2", linear(0.8));
  const EdgeId s3 = b.link("s", "d3", linear(1.2));
  const EdgeId v1 = b.data_center("d1");
  const EdgeId v2 = b.data_center("d2");
  const EdgeId v3 = b.data_center("d3");
  return b.build("shared-edge", {{b.id("s"), {b.id("d1"), b.id("d2"), b.id("d3")}, 1.0}},
                 {{0, {sh, h1, v1}}, {0, {sh, h2, v2}}, {0, {s3, v3}}});
}

Scenario capacitated_pair(double epsilon) {
  Builder b;
  const EdgeId am = b.link("a", "m", linear(0.0));
  const EdgeId bm = b.link("b", "m", linear(0.0));
  const EdgeId md = b.link("m", "d1", EdgeCostSpec::affine(CostKind::link, 0.0, 1.0, 1.0, epsilon));
  const EdgeId ad = b.link("a", "d2", linear(20.0));
  const EdgeId bd = b.link("b", "d2", linear(25.0));
  const EdgeId v1 = b.data_center("d1");
  const EdgeId v2 = b.data_center("d2");
  const std::vector<NodeId> dcs{b.id("d1"), b.id("d2")};
  return b.build("capacitated-pair", {{b.id("a"), dcs, 1.0}, {b.id("b"), dcs, 1.0}},
                 {{0, {am, md, v1}}, {0, {ad, v2}}, {1, {bm, md, v1}}, {1, {bd, v2}}});
}

}  // namespace ecoroute::fixtures
