#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ecoroute/dynamics.hpp"

namespace ecoroute {

inline constexpr double kSupportThreshold = 1e-6;  // × ρ_s
inline constexpr double kNashTolerance = 1e-3;

// Value of a divergence that may be infinite (support mismatch).
struct Divergence {
  double value = 0.0;
  bool infinite = false;
};

// Σ_s Σ_α (p_α/ρ_s) log(p_α/q_α), with 0 log 0 = 0.
Divergence kl_divergence(std::span<const double> p, std::span<const double> q,
                         const PathLayout& layout);

// h(p) + h*(z) − ⟨z, p⟩ on ρ-normalized shares, h the negative entropy and
// h*(z) = Σ_s log Σ_α exp z_α. Equals KL(p, gibbs_map(−z, 1)).
double fenchel_coupling(std::span<const double> p, std::span<const double> z,
                        const PathLayout& layout);

enum class EquilibriumClass { interior, strict, boundary_nonstrict };

std::string_view to_string(EquilibriumClass c);

struct EquilibriumReport {
  std::vector<double> price_spread;
  bool nash = false;
  EquilibriumClass classification = EquilibriumClass::boundary_nonstrict;
  std::optional<double> distance;     // normalized L1 to the oracle optimum
  std::optional<double> optimality_gap;  // C(x) − C*
};

// Nash at tolerance: every supported path (x_α > threshold·ρ_s) has
// π_α ≤ (1 + tol) min_β π_β. Interior: every path supported. Strict: each
// commodity's cheapest path is unique (at tolerance) and carries all mass.
EquilibriumReport is_nash(std::span<const double> x, std::span<const double> prices,
                          const PathLayout& layout, double tol = kNashTolerance,
                          double threshold = kSupportThreshold);

struct BoundEvaluation {
  double t = 0.0;
  double average_consumption = 0.0;  // C̄(t), when supplied
  double entropy_term = 0.0;         // Σ_s log A_s / (η(t) t)
  double noise_term = 0.0;           // σ*² ∫₀ᵗη / (2t)
  double fluctuation_term = 0.0;     // 2σ*² √(log log t / t)
  double remainder_term = 0.0;       // unreported O(1/t) term; always 0
  double optimum = 0.0;              // C*
  double rhs = 0.0;                  // C* + sum of the terms

  bool holds(double slack = 0.0) const { return average_consumption <= rhs + slack; }
};

// Upper bound on C̄(t) for the stochastic dynamics. All inputs in one
// consistent price unit. Throws ValidationError for t ≤ e.
BoundEvaluation bound_rhs(double t, const TemperatureSchedule& schedule, double sigma_star,
                          std::span<const std::size_t> path_counts, double optimum,
                          double average_consumption = 0.0);

struct RateFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
  std::size_t dropped = 0;
};

// Least-squares slope of log gap against log t. Needs ≥ 20 samples spanning
// ≥ 2 decades; nonpositive gaps are dropped and fewer than 10 remaining
// points is an error.
RateFit fit_rate_exponent(std::span<const double> t, std::span<const double> gap);

struct Occupancy {
  double fraction = 0.0;
  std::optional<double> last_exit;  // last inside → outside crossing after burn-in
};

// Time-weighted fraction of [burn_in, T] spent within normalized-L1
// distance δ of `center`. Uses recorded states when present, else the
// samples' tracked distance.
Occupancy ball_occupancy(const Trajectory& trajectory, std::span<const double> center,
                         double delta, double burn_in, const PathLayout& layout);

}  // namespace ecoroute
