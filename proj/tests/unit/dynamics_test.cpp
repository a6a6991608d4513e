#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ecoroute/dynamics.hpp"
#include "ecoroute/error.hpp"
#include "ecoroute/fixtures.hpp"

namespace ecoroute {
namespace {

const PathLayout kPair({{0, 2, 1.0}});

TEST(TemperatureSchedule, ConstantAndPowerLaw) {
  const auto c = TemperatureSchedule::constant(2.0);
  EXPECT_EQ(c.eta(0.0), 2.0);
  EXPECT_EQ(c.eta(1e6), 2.0);
  EXPECT_EQ(c.eta_dot(5.0), 0.0);
  EXPECT_DOUBLE_EQ(c.integral(3.0), 6.0);

  const auto p = TemperatureSchedule::power_law(1.0, 0.5);
  EXPECT_DOUBLE_EQ(p.eta(3.0), 0.5);
  EXPECT_DOUBLE_EQ(p.eta_dot(3.0), -0.5 * std::pow(4.0, -1.5));
  EXPECT_NEAR(p.integral(3.0), 2.0 * (2.0 - 1.0), 1e-12);
  for (double t : {0.0, 1.0, 10.0, 1e4}) EXPECT_LE(p.eta(t + 1.0), p.eta(t));
}

TEST(TemperatureSchedule, RejectsBadParameters) {
  EXPECT_THROW(TemperatureSchedule::constant(0.0), ValidationError);
  EXPECT_THROW(TemperatureSchedule::power_law(1.0, 1.0), ValidationError);
  EXPECT_THROW(TemperatureSchedule::power_law(1.0, -0.1), ValidationError);
}

TEST(GibbsMap, Symmetric) {
  const auto x = gibbs_map(ScoreState{{0.0, 0.0}}, 1.0, kPair);
  EXPECT_DOUBLE_EQ(x.values[0], 0.5);
  EXPECT_DOUBLE_EQ(x.values[1], 0.5);
}

TEST(GibbsMap, ClosedForm) {
  for (double eta : {0.1, 1.0, 7.0}) {
    const auto x = gibbs_map(ScoreState{{0.0, std::log(3.0) / eta}}, eta, kPair);
    EXPECT_NEAR(x.values[0], 0.75, 1e-14);
    EXPECT_NEAR(x.values[1], 0.25, 1e-14);
  }
}

TEST(GibbsMap, SaturatesWithoutOverflow) {
  const auto x = gibbs_map(ScoreState{{0.0, 1e6}}, 1.0, kPair);
  EXPECT_EQ(x.values[0], 1.0);
  EXPECT_EQ(x.values[1], 0.0);
  const auto z = gibbs_map(ScoreState{{-1e300, -1e300}}, 1.0, kPair);
  EXPECT_DOUBLE_EQ(z.values[0], 0.5);
}

TEST(GibbsMap, ScalesByRatePerCommodity) {
  const PathLayout layout({{0, 2, 3.0}, {2, 3, 5.0}});
  const auto x = gibbs_map(ScoreState{{1.0, 2.0, 0.3, 0.1, 0.2}}, 1.5, layout);
  EXPECT_NEAR(x.values[0] + x.values[1], 3.0, 1e-12);
  EXPECT_NEAR(x.values[2] + x.values[3] + x.values[4], 5.0, 1e-12);
  EXPECT_TRUE(validate_state(x, layout).ok());
}

TEST(StepScores, EulerStep) {
  const auto model = fixtures::strict().model();  // π = (1, 2) everywhere
  const auto y = step_scores(ScoreState{{0.0, 0.0}, 0.0}, FlowState{{0.3, 0.7}}, 0.1, model);
  EXPECT_DOUBLE_EQ(y.values[0], 0.1);
  EXPECT_DOUBLE_EQ(y.values[1], 0.2);
  EXPECT_DOUBLE_EQ(y.time, 0.1);
}

TEST(StepScores, ZeroPricesLeaveScores) {
  const auto model = fixtures::shared_hub().model();
  // With no flow only the w² links carry traffic, and they are priced 0.
  const ScoreState y0{{0.5, -1.0, 2.0, 0.0}, 3.0};
  const auto y = step_scores(y0, FlowState{{0.0, 0.0, 0.0, 0.0}}, 0.25, model);
  EXPECT_EQ(y.values, y0.values);
}

TEST(StepScores, InteriorOptimumIsStationary) {
  const auto model = fixtures::interior().model();
  const FlowState x{{0.5, 0.5}};
  const auto y = step_scores(ScoreState{{0.0, 0.0}}, x, 0.01, model);
  EXPECT_DOUBLE_EQ(y.values[0], y.values[1]);
  const auto x2 = gibbs_map(y, 3.0, model.layout());
  EXPECT_DOUBLE_EQ(x2.values[0], 0.5);
}

TEST(ReplicatorRhs, HandEvaluation) {
  const auto v = replicator_rhs(FlowState{{0.5, 0.5}}, std::vector<double>{1.0, 2.0}, 1.0, 0.0,
                                kPair);
  EXPECT_DOUBLE_EQ(v[0], 0.25);
  EXPECT_DOUBLE_EQ(v[1], -0.25);
}

TEST(ReplicatorRhs, RestPointAndConservation) {
  const PathLayout layout({{0, 3, 2.0}});
  const auto rest = replicator_rhs(FlowState{{2.0 / 3, 2.0 / 3, 2.0 / 3}},
                                   std::vector<double>{4.0, 4.0, 4.0}, 1.3, 0.0, layout);
  for (double v : rest) EXPECT_NEAR(v, 0.0, 1e-15);

  const auto v = replicator_rhs(FlowState{{0.2, 0.7, 1.1}}, std::vector<double>{1.0, 3.0, 0.5},
                                2.0, -0.4, layout);
  EXPECT_NEAR(std::accumulate(v.begin(), v.end(), 0.0), 0.0, 1e-10);
}

TEST(ReplicatorRhs, BoundaryStateRejected) {
  EXPECT_THROW(replicator_rhs(FlowState{{1.0, 0.0}}, std::vector<double>{1.0, 2.0}, 1.0, 0.0,
                              kPair),
               BoundaryStateError);
}

TEST(RunDeterministic, InteriorFixtureConverges) {
  const auto model = fixtures::interior().model();
  IntegrationOptions opt;
  opt.dt = 0.01;
  opt.horizon = 100.0;
  opt.sample_interval = 1.0;
  opt.scaling = PriceScaling::none;
  opt.initial_scores = {-2.0, 0.0};
  const auto traj = run_deterministic(model, TemperatureSchedule::power_law(1.0, 0.5), opt);
  EXPECT_NEAR(traj.final().x[0], 0.5, 1e-3);
  EXPECT_NEAR(traj.final().x[1], 0.5, 1e-3);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    EXPECT_GT(traj.samples[i].t, traj.samples[i - 1].t);
  }
}

TEST(RunDeterministic, StrictFixtureConverges) {
  const auto model = fixtures::strict().model();
  IntegrationOptions opt;
  opt.dt = 0.01;
  opt.horizon = 50.0;
  opt.scaling = PriceScaling::none;
  const auto traj = run_deterministic(model, TemperatureSchedule::constant(1.0), opt);
  EXPECT_NEAR(traj.final().x[0], 1.0, 1e-3);
  EXPECT_NEAR(traj.final().x[1], 0.0, 1e-3);
  EXPECT_NEAR(traj.final().t, 50.0, 1e-9);
}

TEST(RunDeterministic, ZeroHorizonSamplesInitialState) {
  const auto model = fixtures::strict().model();
  IntegrationOptions opt;
  opt.horizon = 0.0;
  const auto traj = run_deterministic(model, TemperatureSchedule::constant(1.0), opt);
  ASSERT_EQ(traj.samples.size(), 1u);
  EXPECT_EQ(traj.samples[0].t, 0.0);
  EXPECT_EQ(traj.samples[0].x, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(traj.steps, 0u);
}

TEST(RunDeterministic, AverageOfConstantConsumption) {
  // Starting at the interior optimum the consumption stays at ¾.
  const auto model = fixtures::interior().model();
  IntegrationOptions opt;
  opt.dt = 0.05;
  opt.horizon = 5.0;
  opt.scaling = PriceScaling::none;
  const auto traj = run_deterministic(model, TemperatureSchedule::constant(2.0), opt);
  EXPECT_NEAR(traj.final().average_consumption, 0.75, 1e-12);
  EXPECT_NEAR(traj.final().price_spread[0], 0.0, 1e-12);
}

TEST(RunDeterministic, RejectsBadOptions) {
  const auto model = fixtures::strict().model();
  IntegrationOptions opt;
  opt.dt = 0.0;
  opt.horizon = 1.0;
  EXPECT_THROW(run_deterministic(model, TemperatureSchedule::constant(1.0), opt),
               ValidationError);
  opt.dt = 0.01;
  opt.initial_scores = {0.0};
  EXPECT_THROW(run_deterministic(model, TemperatureSchedule::constant(1.0), opt),
               DimensionError);
}

TEST(PriceSpread, SupportOnly) {
  const auto s = price_spread(std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 2.0},
                              kPair);
  EXPECT_DOUBLE_EQ(s[0], 0.0);  // the expensive path is unused
  const auto t = price_spread(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 2.0},
                              kPair);
  EXPECT_DOUBLE_EQ(t[0], 1.0);
}

}  // namespace
}  // namespace ecoroute
