#include "ecoroute/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ecoroute/error.hpp"
#include "ecoroute/stochastic.hpp"
#include "recorder.hpp"

namespace ecoroute {

TemperatureSchedule::TemperatureSchedule(Kind kind, double eta0, double exponent)
    : kind_(kind), eta0_(eta0), exponent_(exponent) {
  if (!(eta0 > 0.0) || !std::isfinite(eta0)) throw ValidationError("eta0 must be positive");
  if (!(exponent >= 0.0 && exponent < 1.0)) {
    throw ValidationError("heating exponent must lie in [0, 1)");
  }
}

TemperatureSchedule TemperatureSchedule::constant(double eta0) {
  return TemperatureSchedule(Kind::constant, eta0, 0.0);
}

TemperatureSchedule TemperatureSchedule::power_law(double eta0, double exponent) {
  return TemperatureSchedule(Kind::power_law, eta0, exponent);
}

double TemperatureSchedule::eta(double t) const {
  if (kind_ == Kind::constant || exponent_ == 0.0) return eta0_;
  return eta0_ * std::pow(1.0 + t, -exponent_);
}

double TemperatureSchedule::eta_dot(double t) const {
  if (kind_ == Kind::constant || exponent_ == 0.0) return 0.0;
  return -exponent_ * eta0_ * std::pow(1.0 + t, -exponent_ - 1.0);
}

double TemperatureSchedule::integral(double t) const {
  if (kind_ == Kind::constant || exponent_ == 0.0) return eta0_ * t;
  const double p = 1.0 - exponent_;
  return eta0_ * (std::pow(1.0 + t, p) - 1.0) / p;
}

std::string TemperatureSchedule::label() const {
  std::ostringstream out;
  if (kind_ == Kind::constant) {
    out << "constant(" << eta0_ << ")";
  } else {
    out << "power-law(" << eta0_ << ", " << exponent_ << ")";
  }
  return out.str();
}

void gibbs_map_into(std::span<const double> y, double eta, const PathLayout& layout,
                    std::span<double> x) {
  if (y.size() != layout.path_count() || x.size() != layout.path_count()) {
    throw DimensionError("score/flow sizes do not match the path layout");
  }
  if (!(eta > 0.0)) throw ValidationError("inverse temperature must be positive");
  for (const auto& b : layout.blocks()) {
    const auto first = y.begin() + static_cast<std::ptrdiff_t>(b.first);
    const double lowest = *std::min_element(first, first + static_cast<std::ptrdiff_t>(b.count));
    double total = 0.0;
    for (std::size_t i = b.first; i < b.first + b.count; ++i) {
      x[i] = std::exp(-eta * (y[i] - lowest));
      total += x[i];
    }
    const double scale = b.rate / total;
    for (std::size_t i = b.first; i < b.first + b.count; ++i) x[i] *= scale;
  }
}

FlowState gibbs_map(const ScoreState& y, double eta, const PathLayout& layout) {
  FlowState x{std::vector<double>(layout.path_count())};
  gibbs_map_into(y.values, eta, layout, x.values);
  return x;
}

ScoreState step_scores(const ScoreState& y, const FlowState& x, double dt,
                       const CongestionModel& model, double price_scale) {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (y.values.size() != model.path_count()) throw DimensionError("score size mismatch");
  const auto prices = model.prices(x);
  ScoreState next{y.values, y.time + dt};
  for (PathId a = 0; a < prices.size(); ++a) next.values[a] += prices[a] * dt / price_scale;
  return next;
}

std::vector<double> replicator_rhs(const FlowState& x, std::span<const double> prices,
                                   double eta, double eta_dot, const PathLayout& layout) {
  if (x.values.size() != layout.path_count() || prices.size() != layout.path_count()) {
    throw DimensionError("flow/price sizes do not match the path layout");
  }
  for (double v : x.values) {
    if (!(v > 0.0)) {
      throw BoundaryStateError(
          "replicator form needs a strictly interior state; integrate in score space instead");
    }
  }
  std::vector<double> v(x.values.size());
  for (const auto& b : layout.blocks()) {
    double mean_price = 0.0;
    double mean_log = 0.0;
    for (std::size_t i = b.first; i < b.first + b.count; ++i) {
      const double share = x.values[i] / b.rate;
      mean_price += share * prices[i];
      mean_log += share * std::log(x.values[i]);
    }
    for (std::size_t i = b.first; i < b.first + b.count; ++i) {
      const double xi = x.values[i];
      v[i] = -eta * xi * (prices[i] - mean_price) +
             (eta_dot / eta) * xi * (std::log(xi) - mean_log);
    }
  }
  return v;
}

std::vector<double> price_spread(std::span<const double> x, std::span<const double> prices,
                                 const PathLayout& layout) {
  std::vector<double> spread(layout.commodity_count(), 0.0);
  for (CommodityId s = 0; s < layout.commodity_count(); ++s) {
    const auto& b = layout.block(s);
    double lowest = std::numeric_limits<double>::infinity();
    double highest_used = -std::numeric_limits<double>::infinity();
    for (std::size_t i = b.first; i < b.first + b.count; ++i) {
      lowest = std::min(lowest, prices[i]);
      if (x[i] > 1e-6 * b.rate) highest_used = std::max(highest_used, prices[i]);
    }
    spread[s] = std::max(0.0, highest_used - lowest);
  }
  return spread;
}

namespace detail {

double initial_price_scale(const CongestionModel& model, const TemperatureSchedule& schedule,
                           const IntegrationOptions& options) {
  if (options.scaling == PriceScaling::none) return 1.0;
  ScoreState y0{options.initial_scores, 0.0};
  if (y0.values.empty()) y0.values.assign(model.path_count(), 0.0);
  const auto x0 = gibbs_map(y0, schedule.eta(0.0), model.layout());
  return reference_price_scale(model, x0);
}

Trajectory integrate_scores(const CongestionModel& model, const TemperatureSchedule& schedule,
                            const IntegrationOptions& options,
                            std::span<const double> edge_sigma, IncrementSource* noise) {
  check_integration_options(options, model);
  const std::size_t paths = model.path_count();
  const std::size_t edges = model.edge_count();

  const bool noisy =
      noise != nullptr &&
      std::any_of(edge_sigma.begin(), edge_sigma.end(), [](double s) { return s != 0.0; });
  if (noisy) {
    if (edge_sigma.size() != edges || noise->edge_count() != edges) {
      throw DimensionError("noise dimensions must match the edge count");
    }
    if (std::abs(noise->dt() - options.dt) > 1e-12 * options.dt) {
      throw ValidationError("noise source dt differs from the integration dt");
    }
  }

  Trajectory traj;
  traj.dt = options.dt;
  traj.stochastic = noise != nullptr;
  traj.price_scale = initial_price_scale(model, schedule, options);
  const double inv_scale = 1.0 / traj.price_scale;

  std::vector<double> y(options.initial_scores);
  if (y.empty()) y.assign(paths, 0.0);
  std::vector<double> x(paths);
  std::vector<double> dw(noisy ? edges : 0);
  std::vector<double> dz(noisy ? paths : 0);
  ModelWorkspace ws(model);
  Recorder recorder(model, options, traj);

  gibbs_map_into(y, schedule.eta(0.0), model.layout(), x);
  double consumption = ws.evaluate(x);
  recorder.start(x, y, consumption, ws.path_prices(), ws.loads());

  const std::size_t steps = recorder.steps();
  const auto& inc = model.incidence();
  for (std::size_t n = 0; n < steps; ++n) {
    const auto prices = ws.path_prices();
    for (PathId a = 0; a < paths; ++a) y[a] += prices[a] * options.dt * inv_scale;

    double noise_norm = 0.0;
    if (noisy) {
      noise->next(dw);
      for (PathId a = 0; a < paths; ++a) {
        double z = 0.0;
        for (EdgeId e : inc.path_edges(a)) z += edge_sigma[e] * dw[e];
        dz[a] = z * inv_scale;
        y[a] += dz[a];
        noise_norm += dz[a] * dz[a];
      }
      noise_norm = std::sqrt(noise_norm);
    }

    const double t = static_cast<double>(n + 1) * options.dt;
    gibbs_map_into(y, schedule.eta(t), model.layout(), x);
    consumption = ws.evaluate(x);
    for (double v : y) {
      if (!std::isfinite(v)) throw NumericalError("non-finite score");
    }
    recorder.step(n + 1, x, y, consumption, ws.path_prices(), ws.loads(), noise_norm,
                  n + 1 == steps);
  }
  traj.steps = steps;
  return traj;
}

}  // namespace detail

Trajectory run_deterministic(const CongestionModel& model, const TemperatureSchedule& schedule,
                             const IntegrationOptions& options) {
  return detail::integrate_scores(model, schedule, options, {}, nullptr);
}

}  // namespace ecoroute
