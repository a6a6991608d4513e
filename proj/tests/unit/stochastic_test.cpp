#include <gtest/gtest.h>

#include <cmath>

#include "ecoroute/error.hpp"
#include "ecoroute/fixtures.hpp"
#include "ecoroute/stochastic.hpp"

namespace ecoroute {
namespace {

// Paths given as edge lists over `edges` free edges, one commodity of rate 1.
CongestionModel free_model(std::size_t edges, std::vector<std::vector<EdgeId>> columns) {
  const std::size_t paths = columns.size();
  return CongestionModel(PathLayout({{0, paths, 1.0}}),
                         IncidenceMatrix(edges, std::move(columns)),
                         std::vector<EdgeCostSpec>(edges, EdgeCostSpec::free_edge()));
}

TEST(VolatilityMatrix, DisjointPathsGiveHopCounts) {
  const IncidenceMatrix pi(5, {{0, 1}, {2}, {3, 4}});
  const std::vector<double> sigma(5, 1.0);
  const auto v = volatility_matrix(sigma, pi);
  EXPECT_EQ(v.sigma(0, 0), 2.0);
  EXPECT_EQ(v.sigma(1, 1), 1.0);
  EXPECT_EQ(v.sigma(2, 2), 2.0);
  EXPECT_EQ(v.sigma(0, 1), 0.0);
  EXPECT_EQ(v.sigma(1, 2), 0.0);
  EXPECT_EQ(v.sigma_star_sq, 2.0);
}

TEST(VolatilityMatrix, SharedEdge) {
  const IncidenceMatrix pi(3, {{0, 1}, {0, 2}});
  const std::vector<double> sigma{2.0, 1.0, 3.0};
  const auto v = volatility_matrix(sigma, pi);
  EXPECT_EQ(v.sigma(0, 1), 4.0);
  EXPECT_EQ(v.sigma(1, 0), 4.0);
  EXPECT_EQ(v.sigma(0, 0), 5.0);
  EXPECT_EQ(v.sigma(1, 1), 13.0);
  EXPECT_EQ(v.sigma_star_sq, 17.0);
}

TEST(VolatilityMatrix, ZeroNoise) {
  const IncidenceMatrix pi(3, {{0, 1}, {0, 2}});
  const auto v = volatility_matrix(std::vector<double>(3, 0.0), pi);
  EXPECT_TRUE(v.sigma.isZero());
  EXPECT_EQ(v.sigma_star_sq, 0.0);
}

TEST(VolatilitySpec, Resolution) {
  const auto model = fixtures::strict().model();
  const auto x = model.uniform_flow();
  EXPECT_EQ(VolatilitySpec::constant(0.3).resolve(model, x), std::vector<double>(4, 0.3));
  EXPECT_EQ(VolatilitySpec::none().resolve(model, x), std::vector<double>(4, 0.0));
  // Priced edges cost 1 and 2 per unit; the virtual dc edges are free.
  const auto z = VolatilitySpec::fraction_of_mean(0.5).resolve(model, x);
  EXPECT_DOUBLE_EQ(z[0], 0.75);
  EXPECT_DOUBLE_EQ(z[1], 0.75);
  EXPECT_EQ(z[2], 0.0);
  EXPECT_THROW(VolatilitySpec::fraction_of_mean(1.5), ValidationError);
  EXPECT_THROW(VolatilitySpec::constant(-1.0), ValidationError);
  EXPECT_THROW(VolatilitySpec::per_edge({1.0}).resolve(model, x), DimensionError);
}

TEST(NoiseDriver, SameSeedSameStream) {
  NoiseDriver a(42, 3, 0.01);
  NoiseDriver b(42, 3, 0.01);
  NoiseDriver c(43, 3, 0.01);
  std::vector<double> da(3), db(3), dc(3);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    a.next(da);
    b.next(db);
    c.next(dc);
    EXPECT_EQ(da, db);
    differs = differs || da != dc;
  }
  EXPECT_TRUE(differs);
}

TEST(NoiseDriver, MomentsAndIndependence) {
  const double dt = 0.01;
  const int n = 40000;
  NoiseDriver driver(7, 2, dt);
  std::vector<double> dw(2);
  double m0 = 0, v0 = 0, v1 = 0, c01 = 0;
  for (int i = 0; i < n; ++i) {
    driver.next(dw);
    m0 += dw[0];
    v0 += dw[0] * dw[0];
    v1 += dw[1] * dw[1];
    c01 += dw[0] * dw[1];
  }
  EXPECT_LT(std::abs(m0 / n), 5.0 * std::sqrt(dt / n));
  EXPECT_NEAR(v0 / n, dt, 5.0 * dt * std::sqrt(2.0 / n));
  EXPECT_NEAR(v1 / n, dt, 5.0 * dt * std::sqrt(2.0 / n));
  EXPECT_LT(std::abs(c01 / std::sqrt(v0 * v1)), 5.0 / std::sqrt(n));
}

TEST(BrownianPath, CoarseIncrementsAreFineSums) {
  const BrownianPath path(11, 2, 0.001, 8);
  auto fine = path.replay(1);
  auto coarse = path.replay(4);
  EXPECT_DOUBLE_EQ(coarse.dt(), 0.004);
  std::vector<double> f(2), c(2);
  for (int block = 0; block < 2; ++block) {
    std::vector<double> sum(2, 0.0);
    for (int i = 0; i < 4; ++i) {
      fine.next(f);
      sum[0] += f[0];
      sum[1] += f[1];
    }
    coarse.next(c);
    EXPECT_NEAR(c[0], sum[0], 1e-15);
    EXPECT_NEAR(c[1], sum[1], 1e-15);
  }
  EXPECT_THROW(coarse.next(c), ValidationError);
  EXPECT_THROW(path.replay(0), ValidationError);
}

TEST(StepSbr, TwoEdgePathSumsIncrements) {
  const auto model = free_model(2, {{0, 1}});
  const std::vector<double> sigma{1.0, 1.0};
  const std::vector<double> dw{0.3, -0.1};
  const auto y = step_sbr(ScoreState{{1.0}}, FlowState{{1.0}}, 0.7, dw, sigma, model);
  EXPECT_NEAR(y.values[0] - 1.0, 0.2, 1e-15);
}

TEST(StepSbr, SharedEdgeSharedIncrement) {
  const auto model = free_model(3, {{0, 1}, {0, 2}});
  const std::vector<double> sigma{1.5, 0.0, 0.0};
  const std::vector<double> dw{0.4, 0.9, -2.0};
  const auto y = step_sbr(ScoreState{{0.0, 0.0}}, FlowState{{0.5, 0.5}}, 0.1, dw, sigma, model);
  EXPECT_EQ(y.values[0], y.values[1]);
  EXPECT_DOUBLE_EQ(y.values[0], 0.6);
}

TEST(StepSbr, ZeroSigmaIsDeterministicStep) {
  const auto model = fixtures::shared_edge().model();
  const ScoreState y0{{0.1, -0.2, 0.3}};
  const FlowState x{{0.2, 0.3, 0.5}};
  const std::vector<double> sigma(model.edge_count(), 0.0);
  const std::vector<double> dw(model.edge_count(), 0.7);
  EXPECT_EQ(step_sbr(y0, x, 0.05, dw, sigma, model).values,
            step_scores(y0, x, 0.05, model).values);
}

TEST(StepSbr, NonFiniteIncrementAborts) {
  const auto model = free_model(1, {{0}});
  const std::vector<double> sigma{1.0};
  const std::vector<double> dw{std::nan("")};
  EXPECT_THROW(step_sbr(ScoreState{{0.0}}, FlowState{{1.0}}, 0.1, dw, sigma, model),
               NumericalError);
}

TEST(StepSrd, ZeroNoiseIsReplicatorEuler) {
  const auto model = fixtures::shared_edge().model();
  const FlowState x{{0.2, 0.3, 0.5}};
  const std::vector<double> sigma(model.edge_count(), 0.0);
  const std::vector<double> dw(model.edge_count(), 0.0);
  const double dt = 0.01;
  const auto step = step_srd(x, dt, dw, sigma, model, 1.0, 0.0);
  const auto v = replicator_rhs(x, model.prices(x), 1.0, 0.0, model.layout());
  for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(step.x.values[a], x.values[a] + dt * v[a], 1e-15);
  EXPECT_FALSE(step.step_warning);
}

TEST(SrdTerms, ItoVanishesAtSymmetry) {
  const PathLayout layout({{0, 2, 1.0}});
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(2, 2) * 0.49;
  const auto t = srd_terms(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 1.0},
                           std::vector<double>{0.0, 0.0}, sigma, 1.3, 0.0, layout);
  EXPECT_NEAR(t.ito[0], 0.0, 1e-15);
  EXPECT_NEAR(t.ito[1], 0.0, 1e-15);
  EXPECT_NEAR(t.drift[0], 0.0, 1e-15);
}

TEST(StepSrd, StaysOnSimplex) {
  const auto model = fixtures::shared_edge().model();
  NoiseDriver driver(5, model.edge_count(), 0.001);
  const std::vector<double> sigma(model.edge_count(), 0.5);
  std::vector<double> dw(model.edge_count());
  FlowState x{{0.2, 0.3, 0.5}};
  for (int i = 0; i < 200; ++i) {
    driver.next(dw);
    x = step_srd(x, 0.001, dw, sigma, model, 1.0, 0.0).x;
    EXPECT_NEAR(x.values[0] + x.values[1] + x.values[2], 1.0, 1e-14);
  }
}

TEST(StepSrd, RejectsBoundaryAndNonUnitRates) {
  const auto model = fixtures::shared_edge().model();
  const std::vector<double> zeros(model.edge_count(), 0.0);
  EXPECT_THROW(step_srd(FlowState{{0.0, 0.5, 0.5}}, 0.01, zeros, zeros, model, 1.0, 0.0),
               BoundaryStateError);
  const CongestionModel doubled(PathLayout({{0, 3, 2.0}}), model.incidence(),
                                std::vector<EdgeCostSpec>(model.costs().begin(),
                                                          model.costs().end()));
  EXPECT_THROW(step_srd(FlowState{{0.5, 0.5, 1.0}}, 0.01, zeros, zeros, doubled, 1.0, 0.0),
               ValidationError);
}

TEST(RunStochastic, SeededRunsReproduce) {
  const auto model = fixtures::shared_edge().model();
  StochasticOptions opt;
  opt.integration.dt = 0.01;
  opt.integration.horizon = 2.0;
  opt.seed = 99;
  const auto vol = VolatilitySpec::constant(0.3);
  const auto sched = TemperatureSchedule::constant(1.0);
  const auto a = run_stochastic(model, sched, vol, opt);
  const auto b = run_stochastic(model, sched, vol, opt);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  EXPECT_EQ(a.final().x, b.final().x);
  EXPECT_TRUE(a.stochastic);
  opt.seed = 100;
  EXPECT_NE(run_stochastic(model, sched, vol, opt).final().x, a.final().x);
}

TEST(RunStochastic, NoiseSourceDtMustMatch) {
  const auto model = fixtures::shared_edge().model();
  StochasticOptions opt;
  opt.integration.dt = 0.01;
  opt.integration.horizon = 1.0;
  NoiseDriver driver(1, model.edge_count(), 0.02);
  const std::vector<double> sigma(model.edge_count(), 0.1);
  EXPECT_THROW(run_stochastic(model, TemperatureSchedule::constant(1.0), sigma, opt, driver),
               ValidationError);
}

}  // namespace
}  // namespace ecoroute
