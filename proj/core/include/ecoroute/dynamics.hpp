#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecoroute/model.hpp"

namespace ecoroute {

/// Inverse temperature η(t): constant η₀ or the heating schedule
/// η₀ (1 + t)^(−a), a ∈ [0, 1).
class TemperatureSchedule {
 public:
  enum class Kind { constant, power_law };

  static TemperatureSchedule constant(double eta0);
  static TemperatureSchedule power_law(double eta0, double exponent);

  Kind kind() const { return kind_; }
  double eta0() const { return eta0_; }
  double exponent() const { return exponent_; }

  double eta(double t) const;
  double eta_dot(double t) const;
  // ∫₀ᵗ η(s) ds in closed form.
  double integral(double t) const;

  std::string label() const;

 private:
  TemperatureSchedule(Kind kind, double eta0, double exponent);

  Kind kind_ = Kind::constant;
  double eta0_ = 1.0;
  double exponent_ = 0.0;
};

// x_α = ρ_s exp(−η y_α) / Σ_{β∈P_s} exp(−η y_β), max-shifted per commodity.
FlowState gibbs_map(const ScoreState& y, double eta, const PathLayout& layout);
void gibbs_map_into(std::span<const double> y, double eta, const PathLayout& layout,
                    std::span<double> x);

// Explicit Euler step y' = y + π(x) dt / price_scale, t' = t + dt.
ScoreState step_scores(const ScoreState& y, const FlowState& x, double dt,
                       const CongestionModel& model, double price_scale = 1.0);

/// Primal (replicator-form) velocity of the Boltzmann dynamics with
/// ρ_s-normalized averages:
///   ẋ_α = −η x_α [π_α − Σ_β (x_β/ρ_s) π_β]
///         + (η̇/η) x_α [log x_α − Σ_β (x_β/ρ_s) log x_β].
/// Throws BoundaryStateError if some x_α ≤ 0.
std::vector<double> replicator_rhs(const FlowState& x, std::span<const double> prices,
                                   double eta, double eta_dot, const PathLayout& layout);

enum class PriceScaling {
  none,
  // Divide prices (and noise) by reference_price_scale at the initial state.
  max_initial_path_price,
};

struct IntegrationOptions {
  double dt = 0.01;
  double horizon = 0.0;
  // Sampling period in time units; 0 samples every step.
  double sample_interval = 0.0;
  // y(0); empty means all zeros.
  std::vector<double> initial_scores;
  PriceScaling scaling = PriceScaling::max_initial_path_price;
  // Store x and y in every sample.
  bool record_states = true;
  // Optimum to track the normalized L1 distance against.
  std::optional<FlowState> reference;
};

struct TrajectorySample {
  double t = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  double consumption = 0.0;          // C(x(t)), W
  double average_consumption = 0.0;  // C̄(t) = (1/t)∫₀ᵗ C
  std::vector<double> price_spread;  // per commodity, raw price units
  double capacity_violation = 0.0;   // fraction of capacitated edges over cap
  double noise_norm = 0.0;           // ‖dZ‖₂ of the step that produced this sample
  double distance = -1.0;            // to IntegrationOptions::reference; −1 if unset
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;
  double price_scale = 1.0;
  std::uint64_t seed = 0;
  bool stochastic = false;
  std::size_t steps = 0;
  // SRD only: largest per-step simplex renormalization and how many steps
  // exceeded the warning threshold.
  double max_renormalization = 0.0;
  std::size_t step_warnings = 0;

  const TrajectorySample& final() const { return samples.back(); }
};

/// Deterministic Boltzmann routing: Euler steps in score space paired with
/// the Gibbs map. Throws NumericalError on non-finite state.
Trajectory run_deterministic(const CongestionModel& model, const TemperatureSchedule& schedule,
                             const IntegrationOptions& options);

// Per-commodity spread max_{supported α} π_α − min_β π_β, support being
// x_α > 1e-6 ρ_s.
std::vector<double> price_spread(std::span<const double> x, std::span<const double> prices,
                                 const PathLayout& layout);

class IncrementSource;

namespace detail {

// Score-space engine shared by the deterministic and stochastic (SBR)
// integrators. With `noise` null (or all sigmas zero) no noise is drawn.
Trajectory integrate_scores(const CongestionModel& model, const TemperatureSchedule& schedule,
                            const IntegrationOptions& options,
                            std::span<const double> edge_sigma, IncrementSource* noise);

double initial_price_scale(const CongestionModel& model, const TemperatureSchedule& schedule,
                           const IntegrationOptions& options);

}  // namespace detail

}  // namespace ecoroute
