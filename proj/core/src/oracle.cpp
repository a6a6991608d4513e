#include "ecoroute/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ecoroute/error.hpp"
#include "ecoroute/simplex_lp.hpp"

namespace ecoroute {

std::string_view to_string(OracleMethod method) {
  return method == OracleMethod::frank_wolfe ? "frank-wolfe" : "linear-program";
}

namespace {

double objective_value(const CongestionModel& model, std::span<const double> loads,
                       const OracleOptions& options) {
  const auto costs = model.costs();
  double total = 0.0;
  for (EdgeId e = 0; e < costs.size(); ++e) {
    const auto& c = costs[e];
    if (options.hard_capacity) {
      total += c.base_cost(loads[e]);
      if (options.objective == OracleObjective::potential) total -= c.base_cost(0.0);
    } else {
      total += options.objective == OracleObjective::potential ? c.potential(loads[e])
                                                               : c.cost(loads[e]);
    }
  }
  return total;
}

std::vector<double> loads_of(const CongestionModel& model, std::span<const double> x) {
  std::vector<double> w(model.edge_count(), 0.0);
  compute_loads_into(x, model.incidence(), w);
  return w;
}

// ---------------------------------------------------------------- Frank–Wolfe

OracleSolution frank_wolfe(const CongestionModel& model, const OracleOptions& options) {
  const auto& layout = model.layout();
  const auto& inc = model.incidence();
  const auto costs = model.costs();
  const std::size_t paths = model.path_count();
  const std::size_t edges = model.edge_count();

  OracleSolution sol;
  sol.method = OracleMethod::frank_wolfe;
  std::vector<double> x = model.uniform_flow().values;
  std::vector<double> w(edges);
  std::vector<double> grad(paths);
  std::vector<double> d(paths);
  std::vector<double> dw(edges);

  auto path_gradient = [&] {
    compute_loads_into(x, inc, w);
    for (PathId a = 0; a < paths; ++a) {
      double g = 0.0;
      for (EdgeId e : inc.path_edges(a)) g += costs[e].price(w[e]);
      grad[a] = g;
    }
  };
  auto slope_along = [&](double gamma) {
    double s = 0.0;
    for (EdgeId e = 0; e < edges; ++e) {
      if (dw[e] != 0.0) s += costs[e].price(std::max(0.0, w[e] + gamma * dw[e])) * dw[e];
    }
    return s;
  };

  auto block_gradient = [&](const PathLayout::Block& b) {
    for (std::size_t a = b.first; a < b.first + b.count; ++a) {
      double g = 0.0;
      for (EdgeId e : inc.path_edges(a)) g += costs[e].price(w[e]);
      grad[a] = g;
    }
  };

  // Block-coordinate pairwise sweeps: each commodity shifts mass from its
  // most expensive supported path to its cheapest one, with its own exact
  // line search, so one commodity's short step never stalls another's.
  for (sol.iterations = 0; sol.iterations < options.max_iterations; ++sol.iterations) {
    path_gradient();
    const double value = objective_value(model, w, options);
    double fw_gap = 0.0;
    for (const auto& b : layout.blocks()) {
      double lo = grad[b.first];
      for (std::size_t i = b.first; i < b.first + b.count; ++i) lo = std::min(lo, grad[i]);
      for (std::size_t i = b.first; i < b.first + b.count; ++i) fw_gap += x[i] * (grad[i] - lo);
    }
    sol.gap = fw_gap;
    if (fw_gap <= options.tolerance * std::max(std::abs(value), 1e-300)) {
      sol.converged = true;
      break;
    }

    for (const auto& b : layout.blocks()) {
      block_gradient(b);
      std::size_t lo_i = b.first;
      std::size_t hi_i = b.first;
      double hi_g = -std::numeric_limits<double>::infinity();
      for (std::size_t i = b.first; i < b.first + b.count; ++i) {
        if (grad[i] < grad[lo_i]) lo_i = i;
        if (x[i] > 0.0 && grad[i] > hi_g) {
          hi_g = grad[i];
          hi_i = i;
        }
      }
      if (hi_i == lo_i || !(grad[hi_i] > grad[lo_i])) continue;
      std::fill(d.begin(), d.end(), 0.0);
      d[hi_i] = -x[hi_i];
      d[lo_i] = x[hi_i];

      std::fill(dw.begin(), dw.end(), 0.0);
      compute_loads_into(d, inc, dw);
      double gamma = 1.0;
      if (slope_along(1.0) > 0.0) {
        double lo = 0.0;
        double hi = 1.0;
        for (int k = 0; k < 80; ++k) {
          const double mid = 0.5 * (lo + hi);
          (slope_along(mid) > 0.0 ? hi : lo) = mid;
        }
        gamma = 0.5 * (lo + hi);
      }
      double sum = 0.0;
      for (std::size_t i = b.first; i < b.first + b.count; ++i) {
        x[i] = std::max(0.0, x[i] + gamma * d[i]);
        sum += x[i];
      }
      // Re-project the rounding drift onto the commodity's rate.
      for (std::size_t i = b.first; i < b.first + b.count; ++i) x[i] *= b.rate / sum;
      compute_loads_into(x, inc, w);
    }
  }
  compute_loads_into(x, inc, w);
  sol.optimum = objective_value(model, w, options);
  sol.x = FlowState{std::move(x)};
  return sol;
}

// ------------------------------------------------------------- epigraph LP

struct EdgeCuts {
  EdgeId edge = 0;
  double base = 0.0;               // c_e(0), subtracted so epigraph vars are ≥ 0
  std::vector<AffinePiece> pieces;
  bool nonlinear = false;          // smooth, non-affine part needing tangent cuts
};

// Cost function the LP represents for one edge.
double lp_edge_cost(const EdgeCostSpec& c, double w, bool hard) {
  return hard ? c.base_cost(w) : c.cost(w);
}

AffinePiece tangent(const EdgeCostSpec& c, double w) {
  const double slope = c.with_relaxation(std::nullopt, c.epsilon()).price(w);
  return {c.base_cost(w) - slope * w, slope};
}

OracleSolution epigraph_lp(const CongestionModel& model, const OracleOptions& options) {
  const auto& layout = model.layout();
  const auto& inc = model.incidence();
  const auto costs = model.costs();
  const auto n = static_cast<Eigen::Index>(model.path_count());

  std::vector<EdgeCuts> cuts;
  std::vector<EdgeId> hard_rows;
  for (EdgeId e = 0; e < costs.size(); ++e) {
    if (inc.edge_paths(e).empty()) continue;
    const auto& c = costs[e];
    const bool hard = options.hard_capacity && c.capacity();
    EdgeCuts ec;
    ec.edge = e;
    ec.base = lp_edge_cost(c, 0.0, options.hard_capacity);
    const auto physical = hard ? c.with_relaxation(std::nullopt, c.epsilon()) : c;
    ec.pieces = physical.affine_pieces();
    if (ec.pieces.empty()) {
      // Smooth nonlinear base cost: seed tangents, plus the ramp if relaxed.
      ec.nonlinear = true;
      const double top = c.capacity() ? *c.capacity() : layout.total_rate();
      for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) ec.pieces.push_back(tangent(c, f * top));
      if (c.capacity() && !hard) {
        const double cap = *c.capacity();
        const double ramp = 1.0 / c.epsilon();
        ec.pieces.push_back({c.base_cost(cap) - ramp * cap, ramp});
      }
    }
    if (ec.pieces.size() == 1 && ec.pieces[0].slope == 0.0 && !hard) continue;  // constant
    cuts.push_back(std::move(ec));
    if (hard) hard_rows.push_back(e);
  }

  const auto vars = n + static_cast<Eigen::Index>(cuts.size());
  OracleSolution sol;
  sol.method = OracleMethod::linear_program;
  const double constants = [&] {
    double s = 0.0;
    for (EdgeId e = 0; e < costs.size(); ++e) s += lp_edge_cost(costs[e], 0.0, options.hard_capacity);
    return s;
  }();

  for (std::size_t round = 0; round < 500; ++round) {
    LinearProgram lp;
    lp.cost = Eigen::VectorXd::Zero(vars);
    lp.cost.tail(vars - n).setOnes();
    const auto commodities = static_cast<Eigen::Index>(layout.commodity_count());
    lp.a_eq = Eigen::MatrixXd::Zero(commodities, vars);
    lp.b_eq = Eigen::VectorXd::Zero(commodities);
    for (Eigen::Index s = 0; s < commodities; ++s) {
      const auto& b = layout.block(static_cast<CommodityId>(s));
      for (std::size_t i = b.first; i < b.first + b.count; ++i) {
        lp.a_eq(s, static_cast<Eigen::Index>(i)) = 1.0;
      }
      lp.b_eq(s) = b.rate;
    }
    Eigen::Index rows = static_cast<Eigen::Index>(hard_rows.size());
    for (const auto& ec : cuts) rows += static_cast<Eigen::Index>(ec.pieces.size());
    lp.a_ub = Eigen::MatrixXd::Zero(rows, vars);
    lp.b_ub = Eigen::VectorXd::Zero(rows);
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      const auto& ec = cuts[k];
      for (const auto& piece : ec.pieces) {
        // slope·w_e − s_e ≤ c_e(0) − intercept
        for (PathId a : inc.edge_paths(ec.edge)) {
          lp.a_ub(r, static_cast<Eigen::Index>(a)) += piece.slope * inc(ec.edge, a);
        }
        lp.a_ub(r, n + static_cast<Eigen::Index>(k)) = -1.0;
        lp.b_ub(r) = ec.base - piece.intercept;
        ++r;
      }
    }
    for (EdgeId e : hard_rows) {
      for (PathId a : inc.edge_paths(e)) lp.a_ub(r, static_cast<Eigen::Index>(a)) += inc(e, a);
      lp.b_ub(r) = *costs[e].capacity();
      ++r;
    }

    LpOptions lp_options;
    lp_options.max_iterations = options.max_iterations;
    const auto result = solve_lp(lp, lp_options);
    sol.iterations += result.iterations;
    if (result.status == LpStatus::infeasible) {
      throw NumericalError("reference LP is infeasible (capacities cannot carry the demand)");
    }
    if (result.status != LpStatus::optimal) {
      throw NumericalError("reference LP did not reach an optimum");
    }

    std::vector<double> x(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = result.v(i);
    for (const auto& b : layout.blocks()) {
      double sum = 0.0;
      for (std::size_t i = b.first; i < b.first + b.count; ++i) sum += x[i];
      for (std::size_t i = b.first; i < b.first + b.count; ++i) x[i] *= b.rate / sum;
    }
    const auto w = loads_of(model, x);
    const double lower = constants + result.objective;
    OracleOptions eval = options;
    eval.objective = OracleObjective::consumption;
    const double upper = objective_value(model, w, eval);
    sol.gap = std::max(0.0, upper - lower);
    sol.x = FlowState{x};
    sol.optimum = objective_value(model, w, options);
    if (sol.gap <= std::max(options.tolerance, 1e-9) * std::max(std::abs(upper), 1e-300)) {
      sol.converged = true;
      break;
    }
    bool added = false;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      auto& ec = cuts[k];
      if (!ec.nonlinear) continue;
      const double we = w[ec.edge];
      const double epi = ec.base + result.v(n + static_cast<Eigen::Index>(k));
      if (lp_edge_cost(costs[ec.edge], we, options.hard_capacity) > epi * (1.0 + 1e-12)) {
        ec.pieces.push_back(tangent(costs[ec.edge], we));
        added = true;
      }
    }
    if (!added) break;
  }
  return sol;
}

}  // namespace

bool has_flat_direction(const CongestionModel& model, const FlowState& x, double threshold) {
  const auto& layout = model.layout();
  const auto& inc = model.incidence();
  std::vector<PathId> support;
  for (const auto& b : layout.blocks()) {
    for (std::size_t i = b.first; i < b.first + b.count; ++i) {
      if (x.values[i] > threshold * b.rate) support.push_back(i);
    }
  }
  if (support.empty()) return false;
  const auto edges = static_cast<Eigen::Index>(model.edge_count());
  const auto commodities = static_cast<Eigen::Index>(layout.commodity_count());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(edges + commodities,
                                            static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c) {
    const PathId a = support[c];
    for (EdgeId e : inc.path_edges(a)) {
      m(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(c)) = inc(e, a);
    }
    m(edges + static_cast<Eigen::Index>(layout.commodity_of(a)), static_cast<Eigen::Index>(c)) =
        1.0;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-9);
  return lu.rank() < static_cast<Eigen::Index>(support.size());
}

OracleSolution solve_reference_optimum(const CongestionModel& model,
                                       const OracleOptions& options) {
  if (!(options.tolerance > 0.0)) throw ValidationError("oracle tolerance must be positive");
  if (model.path_count() == 0) throw ValidationError("model has no paths");
  const auto costs = model.costs();
  const bool smooth = std::all_of(costs.begin(), costs.end(),
                                  [](const EdgeCostSpec& c) { return c.smooth(); });
  OracleSolution sol = smooth ? frank_wolfe(model, options) : epigraph_lp(model, options);
  sol.non_unique = has_flat_direction(model, sol.x);
  return sol;
}

}  // namespace ecoroute
