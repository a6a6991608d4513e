#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace ecoroute {

/// min cᵀv  s.t.  A_eq v = b_eq,  A_ub v ≤ b_ub,  v ≥ 0.
struct LinearProgram {
  Eigen::VectorXd cost;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  Eigen::VectorXd v;
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct LpOptions {
  std::size_t max_iterations = 200000;
  double tolerance = 1e-9;
};

// Dense two-phase tableau simplex. Dantzig pricing, switching to Bland's
// rule after a run of degenerate pivots.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace ecoroute
