#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ecoroute/dynamics.hpp"
#include "ecoroute/model.hpp"

namespace ecoroute {

/// Per-edge volatility rule for the price noise dZ_α = Σ_{e∈α} σ_e dW_e.
class VolatilitySpec {
 public:
  enum class Rule { constant, per_edge, fraction_of_mean };

  static VolatilitySpec none() { return constant(0.0); }
  // Same σ on every edge.
  static VolatilitySpec constant(double sigma);
  static VolatilitySpec per_edge(std::vector<double> sigma);
  // σ_e = z · mean reference price over the edges that carry a price at the
  // reference state (see reference_edge_prices); zero-price edges stay
  // noiseless. Frozen at construction time of the run, so Σ is bounded.
  static VolatilitySpec fraction_of_mean(double z);

  Rule rule() const { return rule_; }
  double value() const { return value_; }

  std::vector<double> resolve(const CongestionModel& model, const FlowState& x_ref) const;

 private:
  Rule rule_ = Rule::constant;
  double value_ = 0.0;
  std::vector<double> per_edge_;
};

struct VolatilityMatrix {
  Eigen::MatrixXd sigma;        // Σ_{αβ} = Σ_{e∈α∩β} σ_e²
  double sigma_star_sq = 0.0;   // max absolute row sum, a bound on ‖Σ‖
};

// Σ = Πᵀ diag(σ²) Π.
VolatilityMatrix volatility_matrix(std::span<const double> edge_sigma,
                                   const IncidenceMatrix& incidence);

// Source of per-edge Wiener increments ΔW_e ~ N(0, dt).
class IncrementSource {
 public:
  virtual ~IncrementSource() = default;
  virtual std::size_t edge_count() const = 0;
  virtual double dt() const = 0;
  virtual void next(std::span<double> dw) = 0;
};

/// Independent seeded Gaussian stream per edge; edge e's stream is seeded
/// with derive_seed(seed, SeedStream::edge, e), so a given (seed, dt)
/// always yields the same increments.
class NoiseDriver final : public IncrementSource {
 public:
  NoiseDriver(std::uint64_t seed, std::size_t edge_count, double dt);

  std::size_t edge_count() const override { return streams_.size(); }
  double dt() const override { return dt_; }
  void next(std::span<double> dw) override;

 private:
  struct Stream {
    std::mt19937_64 engine;
    double spare = 0.0;
    bool has_spare = false;
    double normal();
  };

  std::vector<Stream> streams_;
  double dt_;
  double sqrt_dt_;
};

/// A Brownian path pre-sampled on a fine grid, replayable at any integer
/// multiple of the fine step. Coarse increments are sums of fine ones, so
/// runs at dt and dt/2 see the same path.
class BrownianPath {
 public:
  BrownianPath(std::uint64_t seed, std::size_t edge_count, double fine_dt,
               std::size_t fine_steps);

  class Replay final : public IncrementSource {
   public:
    Replay(const BrownianPath& path, std::size_t factor);
    std::size_t edge_count() const override { return path_->edges_; }
    double dt() const override { return path_->fine_dt_ * static_cast<double>(factor_); }
    void next(std::span<double> dw) override;

   private:
    const BrownianPath* path_;
    std::size_t factor_;
    std::size_t cursor_ = 0;
  };

  Replay replay(std::size_t factor) const { return Replay(*this, factor); }
  double fine_dt() const { return fine_dt_; }
  std::size_t fine_steps() const { return steps_; }

 private:
  std::size_t edges_;
  double fine_dt_;
  std::size_t steps_;
  std::vector<double> increments_;  // step-major
};

// dZ_α = Σ_{e∈α} σ_e ΔW_e.
std::vector<double> path_noise(std::span<const double> edge_sigma, std::span<const double> dw,
                               const IncidenceMatrix& incidence);

// Euler–Maruyama step of the stochastic Boltzmann scores:
// y' = y + (π(x) dt + dZ) / price_scale.
ScoreState step_sbr(const ScoreState& y, const FlowState& x, double dt,
                    std::span<const double> dw, std::span<const double> edge_sigma,
                    const CongestionModel& model, double price_scale = 1.0);

/// The four terms of the stochastic replicator dynamics for unit-rate
/// commodities: drift (a), martingale increment (b), temperature drift
/// (c) and Itô correction (d). Drift terms are rates (multiply by dt);
/// `martingale` is already an increment.
struct SrdTerms {
  std::vector<double> drift;
  std::vector<double> martingale;
  std::vector<double> temperature;
  std::vector<double> ito;
};

SrdTerms srd_terms(std::span<const double> x, std::span<const double> prices,
                   std::span<const double> dz, const Eigen::MatrixXd& sigma, double eta,
                   double eta_dot, const PathLayout& layout);

struct SrdStep {
  FlowState x;
  double renormalization = 0.0;  // max_s |Σ_α x'_α − 1| before renormalizing
  bool step_warning = false;     // renormalization > kSrdRenormalizationWarning
};

inline constexpr double kSrdRenormalizationWarning = 1e-3;

// Euler–Maruyama step of the stochastic replicator dynamics, followed by a
// per-commodity division onto the simplex. Requires unit rates and a
// strictly interior x (BoundaryStateError otherwise, also if the step
// leaves the interior).
SrdStep step_srd(const FlowState& x, double dt, std::span<const double> dw,
                 std::span<const double> edge_sigma, const CongestionModel& model, double eta,
                 double eta_dot, double price_scale = 1.0);

enum class Integrator { sbr, srd };

struct StochasticOptions {
  IntegrationOptions integration;
  std::uint64_t seed = 0;
  Integrator integrator = Integrator::sbr;
};

Trajectory run_stochastic(const CongestionModel& model, const TemperatureSchedule& schedule,
                          const VolatilitySpec& volatility, const StochasticOptions& options);

// Same, with explicit per-edge σ (raw price units) and noise source; the
// source's dt must match options.integration.dt.
Trajectory run_stochastic(const CongestionModel& model, const TemperatureSchedule& schedule,
                          std::span<const double> edge_sigma, const StochasticOptions& options,
                          IncrementSource& noise);

}  // namespace ecoroute
