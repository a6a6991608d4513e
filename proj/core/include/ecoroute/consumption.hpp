#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "ecoroute/topology.hpp"

namespace ecoroute {

inline constexpr double kDefaultEpsilon = 1e-4;

enum class CostKind { link, dc, custom };

std::string_view to_string(CostKind kind);

// Convex piecewise-linear cost through (w_i, c_i), w_0 = 0, extended past
// the last breakpoint with the last slope.
struct PiecewiseLinearCost {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

// c(w) = offset + coefficient * w^exponent, exponent >= 1.
struct PowerLawCost {
  double offset = 0.0;
  double coefficient = 1.0;
  double exponent = 1.0;
};

using CustomConvexCost = std::variant<PiecewiseLinearCost, PowerLawCost>;

// One affine piece a + b*w of a piecewise-linear cost.
struct AffinePiece {
  double intercept = 0.0;
  double slope = 0.0;
};

/// Edge consumption model: affine c(w) = A + B w (links, data centers) or a
/// certified convex custom function, optionally with a capacity L beyond
/// which the ε-relaxation c(L) + (w − L)/ε applies.
///
/// Construction validates A, B ≥ 0, L > 0, ε > 0 and convexity (including
/// the ramp slope 1/ε dominating the slope at L); violations throw
/// ValidationError.
class EdgeCostSpec {
 public:
  EdgeCostSpec() = default;

  static EdgeCostSpec affine(CostKind kind, double intercept, double slope,
                             std::optional<double> capacity = std::nullopt,
                             double epsilon = kDefaultEpsilon);
  static EdgeCostSpec custom(CustomConvexCost cost,
                             std::optional<double> capacity = std::nullopt,
                             double epsilon = kDefaultEpsilon);
  static EdgeCostSpec free_edge() { return affine(CostKind::link, 0.0, 0.0); }

  CostKind kind() const { return kind_; }
  double intercept() const { return intercept_; }
  double slope() const { return slope_; }
  std::optional<double> capacity() const { return capacity_; }
  double epsilon() const { return epsilon_; }
  const std::optional<CustomConvexCost>& custom_cost() const { return custom_; }

  // Same spec with a different capacity/ε (re-validated).
  EdgeCostSpec with_relaxation(std::optional<double> capacity, double epsilon) const;

  // Unchecked evaluations for w ≥ 0; see edge_cost / edge_price.
  double cost(double w) const;
  double price(double w) const;
  // ∫₀^w price = c(w) − c(0).
  double potential(double w) const;
  // Cost without the ε-ramp (the physical consumption past capacity).
  double base_cost(double w) const;

  // True if the cost is differentiable on (0, ∞).
  bool smooth() const;
  // Affine pieces whose pointwise max equals the cost on w ≥ 0; empty if the
  // cost is not piecewise linear.
  std::vector<AffinePiece> affine_pieces() const;

 private:
  void validate() const;
  double base_price(double w) const;

  CostKind kind_ = CostKind::link;
  double intercept_ = 0.0;
  double slope_ = 0.0;
  std::optional<double> capacity_;
  double epsilon_ = kDefaultEpsilon;
  std::optional<CustomConvexCost> custom_;
};

// Throw ValidationError for negative loads.
double edge_cost(const EdgeCostSpec& spec, double w);
// Left derivative; right derivative at w = 0; B exactly at the kink w = L.
double edge_price(const EdgeCostSpec& spec, double w);

std::vector<double> edge_prices(const LoadVector& w, std::span<const EdgeCostSpec> specs);

// π_α = Σ_{e∈α} ∂₋c_e(w_e), w = Πx.
std::vector<double> path_price(const FlowState& x, const IncidenceMatrix& incidence,
                               std::span<const EdgeCostSpec> specs);

struct ConsumptionReport {
  double total = 0.0;                 // C(x), W
  std::vector<double> per_edge;       // c_e(w_e)
  double potential = 0.0;             // U(x) = Σ_e ∫₀^{w_e} π_e
  double physical = 0.0;              // Σ_e c_e(w_e) without the ε-ramp
};

ConsumptionReport total_consumption(const FlowState& x, const IncidenceMatrix& incidence,
                                    std::span<const EdgeCostSpec> specs);

struct CapacityReport {
  std::vector<EdgeId> violated;
  std::size_t capacitated = 0;
  double fraction = 0.0;
  bool no_capacities = false;
};

CapacityReport capacity_violations(const LoadVector& w, std::span<const EdgeCostSpec> specs);

}  // namespace ecoroute
