#pragma once

#include <cmath>
#include <span>

#include "ecoroute/dynamics.hpp"
#include "ecoroute/error.hpp"

namespace ecoroute::detail {

// Samples a trajectory on a fixed step stride and keeps the trapezoidal
// running integral of C for C̄(t).
class Recorder {
 public:
  Recorder(const CongestionModel& model, const IntegrationOptions& options, Trajectory& out)
      : model_(model), options_(options), out_(out) {
    const double interval = options.sample_interval > 0.0 ? options.sample_interval : options.dt;
    stride_ = static_cast<std::size_t>(std::max(1.0, std::round(interval / options.dt)));
  }

  std::size_t steps() const {
    return static_cast<std::size_t>(std::llround(options_.horizon / options_.dt));
  }

  void start(std::span<const double> x, std::span<const double> y, double consumption,
             std::span<const double> prices, std::span<const double> loads) {
    check(consumption, x);
    previous_ = consumption;
    push(0.0, x, y, consumption, consumption, prices, loads, 0.0);
  }

  // Call after step n (1-based) has produced the state at t = n dt.
  void step(std::size_t n, std::span<const double> x, std::span<const double> y,
            double consumption, std::span<const double> prices, std::span<const double> loads,
            double noise_norm, bool last) {
    check(consumption, x);
    integral_ += 0.5 * (previous_ + consumption) * options_.dt;
    previous_ = consumption;
    if (n % stride_ == 0 || last) {
      const double t = static_cast<double>(n) * options_.dt;
      push(t, x, y, consumption, integral_ / t, prices, loads, noise_norm);
    }
  }

 private:
  void check(double consumption, std::span<const double> x) const {
    if (!std::isfinite(consumption)) throw NumericalError("non-finite consumption");
    for (double v : x) {
      if (!std::isfinite(v)) throw NumericalError("non-finite flow state");
    }
  }

  void push(double t, std::span<const double> x, std::span<const double> y, double consumption,
            double average, std::span<const double> prices, std::span<const double> loads,
            double noise_norm) {
    TrajectorySample s;
    s.t = t;
    if (options_.record_states) {
      s.x.assign(x.begin(), x.end());
      s.y.assign(y.begin(), y.end());
    }
    s.consumption = consumption;
    s.average_consumption = average;
    s.price_spread = price_spread(x, prices, model_.layout());
    std::size_t capacitated = 0;
    std::size_t over = 0;
    const auto costs = model_.costs();
    for (std::size_t e = 0; e < costs.size(); ++e) {
      if (const auto cap = costs[e].capacity()) {
        ++capacitated;
        if (loads[e] > *cap) ++over;
      }
    }
    s.capacity_violation =
        capacitated ? static_cast<double>(over) / static_cast<double>(capacitated) : 0.0;
    s.noise_norm = noise_norm;
    if (options_.reference) {
      s.distance = normalized_l1_distance(x, options_.reference->values, model_.layout());
    }
    out_.samples.push_back(std::move(s));
  }

  const CongestionModel& model_;
  const IntegrationOptions& options_;
  Trajectory& out_;
  std::size_t stride_ = 1;
  double integral_ = 0.0;
  double previous_ = 0.0;
};

inline void check_integration_options(const IntegrationOptions& options,
                                      const CongestionModel& model) {
  if (!(options.dt > 0.0) || !std::isfinite(options.dt)) {
    throw ValidationError("dt must be positive");
  }
  if (!(options.horizon >= 0.0) || !std::isfinite(options.horizon)) {
    throw ValidationError("horizon must be >= 0");
  }
  if (options.horizon > 0.0 && options.horizon < options.dt) {
    throw ValidationError("horizon must exceed dt");
  }
  if (!options.initial_scores.empty() && options.initial_scores.size() != model.path_count()) {
    throw DimensionError("initial scores must have one entry per path");
  }
  if (options.reference && options.reference->values.size() != model.path_count()) {
    throw DimensionError("reference state must have one entry per path");
  }
}

}  // namespace ecoroute::detail
