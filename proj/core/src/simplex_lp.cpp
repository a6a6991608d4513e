#include "ecoroute/simplex_lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ecoroute/error.hpp"

namespace ecoroute {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kPivotTolerance = 1e-9;
constexpr std::size_t kReinvertEvery = 400;

class Tableau {
 public:
  Tableau(const LinearProgram& lp, const LpOptions& options)
      : options_(options),
        n_(static_cast<Eigen::Index>(lp.cost.size())),
        m_eq_(lp.a_eq.rows()),
        m_ub_(lp.a_ub.rows()),
        m_(m_eq_ + m_ub_),
        slack0_(n_),
        art0_(n_ + m_ub_),
        cols_(n_ + m_ub_ + m_),
        original_(RowMatrix::Zero(m_, cols_ + 1)),
        basis_(static_cast<std::size_t>(m_)),
        redundant_(static_cast<std::size_t>(m_), false) {
    if ((m_eq_ > 0 && lp.a_eq.cols() != n_) || (m_ub_ > 0 && lp.a_ub.cols() != n_) ||
        lp.b_eq.size() != m_eq_ || lp.b_ub.size() != m_ub_) {
      throw DimensionError("linear program dimensions are inconsistent");
    }
    for (Eigen::Index r = 0; r < m_; ++r) {
      const bool eq = r < m_eq_;
      const Eigen::Index k = eq ? r : r - m_eq_;
      const double rhs = eq ? lp.b_eq(k) : lp.b_ub(k);
      // Equilibrate the row so tolerances mean the same thing everywhere.
      const auto row = eq ? lp.a_eq.row(k) : lp.a_ub.row(k);
      const double norm = row.size() > 0 ? row.cwiseAbs().maxCoeff() : 0.0;
      const double unit = norm > 0.0 ? 1.0 / norm : 1.0;
      const double sign = (rhs < 0.0 ? -1.0 : 1.0) * unit;
      original_.block(r, 0, 1, n_) = sign * row;
      if (!eq) original_(r, slack0_ + k) = sign;
      original_(r, art0_ + r) = 1.0;
      original_(r, cols_) = sign * rhs;
      // A slack with a positive coefficient is a feasible starting column.
      basis_[static_cast<std::size_t>(r)] = !eq && sign > 0.0 ? slack0_ + k : art0_ + r;
    }
    t_ = RowMatrix::Zero(m_ + 1, cols_ + 1);
    t_.topRows(m_) = original_;
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Eigen::Index j = basis_[static_cast<std::size_t>(r)];
      if (j < art0_) t_.row(r) /= t_(r, j);
    }
    scale_ = std::max(1.0, lp.cost.size() > 0 ? lp.cost.cwiseAbs().maxCoeff() : 0.0);
    rhs_scale_ = std::max(1.0, original_.col(cols_).cwiseAbs().maxCoeff());
  }

  LpSolution solve(const Eigen::VectorXd& cost) {
    LpSolution out;
    phase_cost_ = [this](Eigen::Index j) { return j >= art0_ && j < cols_ ? 1.0 : 0.0; };
    set_objective();
    auto status = iterate(cols_, out.iterations);
    if (status != LpStatus::optimal) {
      out.status = status;
      return out;
    }
    if (-t_(m_, cols_) > options_.tolerance * static_cast<double>(m_ + 1) * rhs_scale_) {
      out.status = LpStatus::infeasible;
      return out;
    }
    drive_out_artificials();

    phase_cost_ = [this, &cost](Eigen::Index j) { return j < n_ ? cost(j) : 0.0; };
    set_objective();
    status = iterate(art0_, out.iterations);
    out.status = status;
    if (status != LpStatus::optimal) return out;
    reinvert();

    out.v = Eigen::VectorXd::Zero(n_);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(cols_);
    for (Eigen::Index r = 0; r < m_; ++r) {
      const Eigen::Index j = basis_[static_cast<std::size_t>(r)];
      full(j) = t_(r, cols_);
      if (j < n_) out.v(j) = std::max(0.0, t_(r, cols_));
    }
    out.objective = cost.dot(out.v);
    // Residual against the equilibrated original rows.
    const double residual =
        (original_.leftCols(cols_) * full - original_.col(cols_)).cwiseAbs().maxCoeff();
    if (residual > 1e-6 * rhs_scale_) {
      throw NumericalError("simplex lost accuracy (residual " + std::to_string(residual) + ")");
    }
    return out;
  }

 private:
  void set_objective() {
    t_.row(m_).setZero();
    for (Eigen::Index j = 0; j < cols_; ++j) t_(m_, j) = phase_cost_(j);
    for (Eigen::Index r = 0; r < m_; ++r) {
      const double cb = phase_cost_(basis_[static_cast<std::size_t>(r)]);
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(r);
    }
  }

  // Rebuilds the constraint rows as B⁻¹[A | b] from the original data.
  void reinvert() {
    Eigen::MatrixXd b(m_, m_);
    for (Eigen::Index r = 0; r < m_; ++r) {
      b.col(r) = original_.col(basis_[static_cast<std::size_t>(r)]);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    t_.topRows(m_) = lu.solve(Eigen::MatrixXd(original_));
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (redundant_[static_cast<std::size_t>(r)]) neutralize(r);
      if (t_(r, cols_) < 0.0 && t_(r, cols_) > -1e-9 * rhs_scale_) t_(r, cols_) = 0.0;
    }
    set_objective();
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index r = 0; r <= m_; ++r) {
      if (r == row) continue;
      const double f = t_(r, col);
      if (f != 0.0) t_.row(r) -= f * t_.row(row);
    }
    t_(row, col) = 1.0;
    basis_[static_cast<std::size_t>(row)] = col;
  }

  LpStatus iterate(Eigen::Index column_limit, std::size_t& iterations) {
    const double dj_tol = options_.tolerance * scale_;
    const double feas_tol = options_.tolerance * rhs_scale_;
    std::size_t degenerate_run = 0;
    std::size_t since_reinvert = 0;
    while (true) {
      if (iterations >= options_.max_iterations) return LpStatus::iteration_limit;
      if (since_reinvert >= kReinvertEvery) {
        reinvert();
        since_reinvert = 0;
      }
      const bool bland = degenerate_run > 50;
      Eigen::Index enter = -1;
      double best = -dj_tol;
      for (Eigen::Index j = 0; j < column_limit; ++j) {
        const double d = t_(m_, j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return LpStatus::optimal;

      // Harris ratio test: bound the step with relaxed ratios, then take the
      // largest pivot among the rows within that bound.
      double bound = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < m_; ++r) {
        const double a = t_(r, enter);
        if (a > kPivotTolerance) bound = std::min(bound, (t_(r, cols_) + feas_tol) / a);
      }
      if (!std::isfinite(bound)) return LpStatus::unbounded;
      Eigen::Index leave = -1;
      double largest = 0.0;
      for (Eigen::Index r = 0; r < m_; ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotTolerance || t_(r, cols_) / a > bound) continue;
        if (leave < 0 || a > largest ||
            (bland && a == largest &&
             basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
          largest = a;
          leave = r;
        }
      }
      const double step = t_(leave, cols_) / largest;
      degenerate_run = step <= feas_tol ? degenerate_run + 1 : 0;
      pivot(leave, enter);
      for (Eigen::Index r = 0; r < m_; ++r) {
        if (t_(r, cols_) < 0.0) t_(r, cols_) = 0.0;
      }
      ++iterations;
      ++since_reinvert;
    }
  }

  void neutralize(Eigen::Index r) {
    t_.row(r).setZero();
    t_(r, basis_[static_cast<std::size_t>(r)]) = 1.0;
  }

  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < art0_) continue;
      Eigen::Index col = -1;
      double biggest = 1e-7;
      for (Eigen::Index j = 0; j < art0_; ++j) {
        if (std::abs(t_(r, j)) > biggest) {
          biggest = std::abs(t_(r, j));
          col = j;
        }
      }
      if (col >= 0) {
        pivot(r, col);
      } else {
        redundant_[static_cast<std::size_t>(r)] = true;
        neutralize(r);
      }
    }
  }

  LpOptions options_;
  Eigen::Index n_, m_eq_, m_ub_, m_, slack0_, art0_, cols_;
  RowMatrix original_;
  RowMatrix t_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> redundant_;
  std::function<double(Eigen::Index)> phase_cost_;
  double scale_ = 1.0;      // cost magnitude, for reduced-cost tests
  double rhs_scale_ = 1.0;  // right-hand-side magnitude, for feasibility tests
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  return Tableau(lp, options).solve(lp.cost);
}

}  // namespace ecoroute
