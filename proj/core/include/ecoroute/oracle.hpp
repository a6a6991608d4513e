#pragma once

#include <cstddef>
#include <string_view>

#include "ecoroute/model.hpp"

namespace ecoroute {

enum class OracleObjective {
  consumption,  // C(x) = Σ_e c_e(w_e)
  potential,    // U(x) = Σ_e ∫₀^{w_e} π_e
};

enum class OracleMethod { frank_wolfe, linear_program };

std::string_view to_string(OracleMethod method);

struct OracleOptions {
  // Stop once the certified gap is ≤ tolerance · objective.
  double tolerance = 1e-9;
  std::size_t max_iterations = 200000;
  OracleObjective objective = OracleObjective::consumption;
  // Replace each ε-ramp by the hard constraint w_e ≤ L_e (physical cost).
  bool hard_capacity = false;
};

struct OracleSolution {
  FlowState x;
  double optimum = 0.0;  // objective value at x
  double gap = 0.0;      // Frank–Wolfe gap or cutting-plane gap
  std::size_t iterations = 0;
  bool converged = false;
  // Some direction moves x while keeping every edge load and commodity
  // rate fixed, so x* is not unique even when w* is.
  bool non_unique = false;
  OracleMethod method = OracleMethod::frank_wolfe;
};

/// Reference minimizer of the objective over the product of simplices.
/// Smooth instances use Frank–Wolfe with pairwise steps and exact line
/// search; kinked instances (capacities, piecewise-linear costs) are solved
/// exactly as an epigraph linear program, with tangent cuts for any smooth
/// nonlinear edges. Throws NumericalError if the LP is infeasible.
OracleSolution solve_reference_optimum(const CongestionModel& model,
                                       const OracleOptions& options = {});

// True if the support of x admits a load- and rate-preserving direction.
bool has_flat_direction(const CongestionModel& model, const FlowState& x,
                        double threshold = 1e-9);

}  // namespace ecoroute
