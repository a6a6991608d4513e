#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ecoroute/error.hpp"
#include "ecoroute/fixtures.hpp"
#include "ecoroute/scenario.hpp"

namespace ecoroute {
namespace {

void expect_same(const Scenario& a, const Scenario& b) {
  EXPECT_EQ(a.name, b.name);
  ASSERT_EQ(a.graph.node_count(), b.graph.node_count());
  ASSERT_EQ(a.graph.edge_count(), b.graph.edge_count());
  for (EdgeId e = 0; e < a.graph.edge_count(); ++e) {
    EXPECT_EQ(a.graph.edge(e).name, b.graph.edge(e).name);
    EXPECT_EQ(a.graph.edge(e).kind, b.graph.edge(e).kind);
    EXPECT_EQ(cost_to_json(a.costs[e]), cost_to_json(b.costs[e]));
  }
  ASSERT_EQ(a.paths.size(), b.paths.size());
  for (std::size_t p = 0; p < a.paths.size(); ++p) {
    EXPECT_EQ(a.paths[p].edges, b.paths[p].edges);
    EXPECT_EQ(a.paths[p].commodity, b.paths[p].commodity);
  }
  ASSERT_EQ(a.commodities.size(), b.commodities.size());
  for (std::size_t s = 0; s < a.commodities.size(); ++s) {
    EXPECT_EQ(a.commodities[s].rate, b.commodities[s].rate);
    EXPECT_EQ(a.commodities[s].destinations, b.commodities[s].destinations);
  }
}

TEST(ScenarioJson, FixturesRoundTrip) {
  for (const auto& s : {fixtures::interior(), fixtures::shared_hub(), fixtures::shared_edge(),
                        fixtures::capacitated_pair(0.01)}) {
    const auto j = scenario_to_json(s);
    expect_same(s, scenario_from_json(j));
    EXPECT_EQ(scenario_to_json(scenario_from_json(j)), j);
  }
}

TEST(ScenarioJson, CostKinds) {
  for (const auto& spec :
       {EdgeCostSpec::affine(CostKind::dc, 6600, 3.3, 2000.0, 1e-3),
        EdgeCostSpec::custom(PowerLawCost{1.0, 2.0, 2.5}),
        EdgeCostSpec::custom(PiecewiseLinearCost{{0, 1, 3}, {0, 1, 5}}, 2.0)}) {
    const auto back = cost_from_json(cost_to_json(spec));
    for (double w : {0.0, 0.5, 1.7, 4.0}) EXPECT_DOUBLE_EQ(back.cost(w), spec.cost(w));
    EXPECT_EQ(back.capacity(), spec.capacity());
  }
  EXPECT_THROW(cost_from_json({{"type", "cubic"}}), ValidationError);
  EXPECT_THROW(cost_from_json({{"type", "affine"}, {"kind", "router"}, {"intercept", 0},
                               {"slope", 1}}),
               ValidationError);
}

TEST(ScenarioJson, EnumeratesPathsFromRoutingKey) {
  auto j = scenario_to_json(fixtures::shared_edge());
  j.erase("paths");
  j["routing"] = "m-closest:3";
  const auto s = scenario_from_json(j);
  ASSERT_TRUE(s.mode);
  EXPECT_EQ(s.mode->label(), "m-closest:3");
  EXPECT_EQ(s.paths.size(), 3u);
  j["routing"] = "single";
  EXPECT_EQ(scenario_from_json(j).paths.size(), 1u);
}

TEST(ScenarioJson, MalformedInputsAreValidationErrors) {
  const auto good = scenario_to_json(fixtures::interior());
  auto j = good;
  j["schema_version"] = 99;
  EXPECT_THROW(scenario_from_json(j), ValidationError);
  j = good;
  j.erase("nodes");
  EXPECT_THROW(scenario_from_json(j), ValidationError);
  j = good;
  j["edges"][0]["u"] = "nowhere";
  EXPECT_THROW(scenario_from_json(j), ValidationError);
  j = good;
  j["paths"][0]["edges"] = {"s-d2", "d1-dc"};
  EXPECT_THROW(scenario_from_json(j), ValidationError);
  j = good;
  j["commodities"][0]["rate"] = "fast";
  EXPECT_THROW(scenario_from_json(j), ValidationError);
}

TEST(ScenarioFile, SaveAndLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "ecoroute_scenario_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "hub.json";
  save_scenario(fixtures::shared_hub(), file);
  expect_same(fixtures::shared_hub(), load_scenario(file));

  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_THROW(load_scenario(dir / "broken.json"), ValidationError);
  EXPECT_THROW(load_scenario(dir / "missing.json"), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST(Scenario, ModelAndCounts) {
  const auto s = fixtures::shared_hub();
  EXPECT_DOUBLE_EQ(s.total_rate(), 2.0);
  EXPECT_EQ(s.path_counts(), (std::vector<std::size_t>{2, 2}));
  const auto m = s.model();
  EXPECT_EQ(m.path_count(), 4u);
  EXPECT_EQ(m.edge_count(), s.graph.edge_count());
}

TEST(Scenario, WithModeAndEpsilon) {
  const auto s = fixtures::shared_edge();
  EXPECT_EQ(with_mode(s, RoutingMode::single()).paths.size(), 1u);
  const auto relaxed = with_epsilon(fixtures::capacitated_pair(), 0.05);
  for (const auto& c : relaxed.costs) {
    if (c.capacity()) {
      EXPECT_EQ(c.epsilon(), 0.05);
    }
  }
}

TEST(Scenario, ExplicitPathsAreValidated) {
  const auto s = fixtures::interior();
  // The first fiber link paired with the other data center's terminal edge.
  std::vector<Path> bad{{0, {0, 3}}};
  EXPECT_THROW(make_scenario("bad", s.graph, s.commodities, s.costs, bad), ValidationError);
  EXPECT_THROW(make_scenario("bad", s.graph, s.commodities, {}, s.paths), DimensionError);
  EXPECT_THROW(make_scenario("bad", s.graph, {}, s.costs, std::vector<Path>{}), ValidationError);
}

}  // namespace
}  // namespace ecoroute
