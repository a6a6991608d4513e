#include <gtest/gtest.h>

#include "ecoroute/consumption.hpp"
#include "ecoroute/error.hpp"
#include "ecoroute/fixtures.hpp"

namespace ecoroute {
namespace {

const auto kLink160 = EdgeCostSpec::affine(CostKind::link, 60.0, 3.58);
const auto kDc = EdgeCostSpec::affine(CostKind::dc, 6600.0, 3.3);
const auto kRamp = EdgeCostSpec::affine(CostKind::link, 0.0, 2.0, 10.0, 0.01);

TEST(EdgeCost, AffineAndRamp) {
  EXPECT_DOUBLE_EQ(edge_cost(kLink160, 0.0), 60.0);
  EXPECT_DOUBLE_EQ(edge_cost(kDc, 2000.0), 13200.0);
  EXPECT_DOUBLE_EQ(edge_cost(kDc, 1000.0), 9900.0);
  EXPECT_NEAR(edge_cost(kRamp, 12.0), 220.0, 1e-9);
  EXPECT_DOUBLE_EQ(edge_cost(kRamp, 10.0), 20.0);
}

TEST(EdgeCost, NegativeLoadRejected) {
  EXPECT_THROW(edge_cost(kLink160, -1e-9), ValidationError);
  EXPECT_THROW(edge_price(kLink160, -1.0), ValidationError);
}

TEST(EdgePrice, LeftDerivative) {
  EXPECT_DOUBLE_EQ(edge_price(kRamp, 10.0), 2.0);  // kink: lower slope
  EXPECT_DOUBLE_EQ(edge_price(kRamp, 10.5), 100.0);
  EXPECT_DOUBLE_EQ(edge_price(kRamp, 0.0), 2.0);   // right derivative at 0
  for (double w : {0.0, 1.0, 1e3, 1e6}) EXPECT_DOUBLE_EQ(edge_price(kLink160, w), 3.58);
}

TEST(EdgePrice, PowerLawAndPiecewise) {
  const auto sq = EdgeCostSpec::custom(PowerLawCost{1.0, 1.0, 2.0});
  EXPECT_DOUBLE_EQ(edge_cost(sq, 3.0), 10.0);
  EXPECT_DOUBLE_EQ(edge_price(sq, 3.0), 6.0);
  EXPECT_DOUBLE_EQ(sq.potential(3.0), 9.0);

  const auto pw = EdgeCostSpec::custom(PiecewiseLinearCost{{0.0, 1.0, 2.0}, {1.0, 2.0, 5.0}});
  EXPECT_DOUBLE_EQ(edge_cost(pw, 1.5), 3.5);
  EXPECT_DOUBLE_EQ(edge_cost(pw, 3.0), 8.0);  // last slope extends
  EXPECT_DOUBLE_EQ(edge_price(pw, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(edge_price(pw, 1.0 + 1e-12), 3.0);
  EXPECT_DOUBLE_EQ(pw.potential(3.0), 7.0);
  EXPECT_FALSE(pw.smooth());
  EXPECT_TRUE(sq.smooth());
}

TEST(EdgeCostSpec, ValidationRejectsNonconvexOrNegative) {
  EXPECT_THROW(EdgeCostSpec::affine(CostKind::link, -1.0, 1.0), ValidationError);
  EXPECT_THROW(EdgeCostSpec::affine(CostKind::link, 0.0, -1.0), ValidationError);
  EXPECT_THROW(EdgeCostSpec::affine(CostKind::link, 0.0, 1.0, 0.0), ValidationError);
  EXPECT_THROW(EdgeCostSpec::affine(CostKind::link, 0.0, 1.0, 1.0, 0.0), ValidationError);
  EXPECT_THROW(EdgeCostSpec::affine(CostKind::custom, 0.0, 1.0), ValidationError);
  // Concave piecewise.
  EXPECT_THROW(EdgeCostSpec::custom(PiecewiseLinearCost{{0.0, 1.0, 2.0}, {0.0, 2.0, 3.0}}),
               ValidationError);
  EXPECT_THROW(EdgeCostSpec::custom(PiecewiseLinearCost{{0.5, 1.0}, {0.0, 1.0}}),
               ValidationError);
  EXPECT_THROW(EdgeCostSpec::custom(PowerLawCost{0.0, 1.0, 0.5}), ValidationError);
  // Ramp flatter than the cost at capacity.
  EXPECT_THROW(EdgeCostSpec::affine(CostKind::link, 0.0, 200.0, 1.0, 0.01), ValidationError);
}

TEST(EdgeCostSpec, AffinePiecesReproduceCost) {
  const auto pieces = kRamp.affine_pieces();
  ASSERT_EQ(pieces.size(), 2u);
  for (double w : {0.0, 5.0, 10.0, 11.0, 30.0}) {
    double best = -1e300;
    for (const auto& p : pieces) best = std::max(best, p.intercept + p.slope * w);
    EXPECT_NEAR(best, kRamp.cost(w), 1e-9) << w;
  }
  EXPECT_TRUE(EdgeCostSpec::custom(PowerLawCost{0.0, 1.0, 2.0}).affine_pieces().empty());
}

TEST(EdgeCostSpec, BaseCostDropsTheRamp) {
  EXPECT_DOUBLE_EQ(kRamp.base_cost(12.0), 24.0);
  EXPECT_DOUBLE_EQ(kRamp.potential(12.0), 220.0);
}

TEST(PathPrice, DisjointAffine) {
  const NetworkGraph g(
      {Node{"a", {}, {}, false}, Node{"b", {}, {}, false}, Node{"c", {}, {}, false}},
      {Edge{"ab", 0, 1, 1.0, EdgeKind::fiber}, Edge{"bc", 1, 2, 1.0, EdgeKind::fiber}});
  const std::vector<Path> paths{{0, {0}}, {0, {1}}};
  const auto pi = build_incidence(paths, g);
  const std::vector<EdgeCostSpec> specs{EdgeCostSpec::affine(CostKind::link, 0, 1),
                                        EdgeCostSpec::affine(CostKind::link, 0, 2)};
  for (double x0 : {0.0, 0.3, 1.0}) {
    EXPECT_EQ(path_price(FlowState{{x0, 1.0 - x0}}, pi, specs), (std::vector<double>{1, 2}));
  }
}

TEST(PathPrice, LinkPlusDataCenter) {
  const IncidenceMatrix pi(2, {{0, 1}});
  const std::vector<EdgeCostSpec> specs{kLink160, kDc};
  EXPECT_NEAR(path_price(FlowState{{5.0}}, pi, specs)[0], 6.88, 1e-12);
}

TEST(PathPrice, ZeroEdgePathRejected) {
  const IncidenceMatrix pi(1, {{0}, {}});
  const std::vector<EdgeCostSpec> specs{kLink160};
  EXPECT_THROW(path_price(FlowState{{1.0, 1.0}}, pi, specs), ValidationError);
}

TEST(PathPrice, SpecCountMismatch) {
  const IncidenceMatrix pi(2, {{0, 1}});
  const std::vector<EdgeCostSpec> specs{kLink160};
  EXPECT_THROW(path_price(FlowState{{1.0}}, pi, specs), DimensionError);
}

TEST(TotalConsumption, ZeroFlowZeroIntercepts) {
  const auto s = fixtures::interior();
  const auto r = total_consumption(FlowState{{0.0, 0.0}}, s.model().incidence(), s.costs);
  EXPECT_EQ(r.total, 0.0);
  EXPECT_EQ(r.potential, 0.0);
}

TEST(TotalConsumption, InteriorFixture) {
  const auto s = fixtures::interior();
  const auto r = total_consumption(FlowState{{0.5, 0.5}}, s.model().incidence(), s.costs);
  EXPECT_DOUBLE_EQ(r.total, 0.75);
  double sum = 0.0;
  for (double c : r.per_edge) sum += c;
  EXPECT_DOUBLE_EQ(sum, r.total);
  // ∫₀^½ 2w dw + ∫₀^½ 1 dw
  EXPECT_DOUBLE_EQ(r.potential, 0.75);
}

TEST(CapacityViolations, Counting) {
  const auto cap = EdgeCostSpec::affine(CostKind::link, 0.0, 1.0, 10.0);
  const std::vector<EdgeCostSpec> specs{cap, cap, cap, cap, kLink160};
  auto r = capacity_violations(LoadVector{{1, 2, 3, 4, 500}}, specs);
  EXPECT_EQ(r.fraction, 0.0);
  EXPECT_TRUE(r.violated.empty());
  EXPECT_FALSE(r.no_capacities);

  r = capacity_violations(LoadVector{{1, 10, 10.5, 4, 500}}, specs);
  EXPECT_EQ(r.capacitated, 4u);
  EXPECT_EQ(r.violated, (std::vector<EdgeId>{2}));
  EXPECT_DOUBLE_EQ(r.fraction, 0.25);
}

TEST(CapacityViolations, NoCapacitiesFlag) {
  const std::vector<EdgeCostSpec> specs{kLink160, kDc};
  const auto r = capacity_violations(LoadVector{{1e9, 1e9}}, specs);
  EXPECT_TRUE(r.no_capacities);
  EXPECT_EQ(r.fraction, 0.0);
}

}  // namespace
}  // namespace ecoroute
