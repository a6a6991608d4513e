#include "ecoroute/consumption.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecoroute/error.hpp"

namespace ecoroute {

std::string_view to_string(CostKind kind) {
  switch (kind) {
    case CostKind::link:
      return "link";
    case CostKind::dc:
      return "dc";
    case CostKind::custom:
      return "custom";
  }
  return "unknown";
}

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

// Index i of the segment [w_i, w_{i+1}] holding w in the left-derivative
// sense (w_i < w <= w_{i+1}); the last segment extends to infinity.
std::size_t left_segment(const PiecewiseLinearCost& pl, double w) {
  const auto& bp = pl.breakpoints;
  const std::size_t segments = bp.size() - 1;
  auto it = std::lower_bound(bp.begin() + 1, bp.end(), w);
  const std::size_t idx = static_cast<std::size_t>(it - bp.begin());
  return std::min(idx == 0 ? 0 : idx - 1, segments - 1);
}

double segment_slope(const PiecewiseLinearCost& pl, std::size_t i) {
  return (pl.values[i + 1] - pl.values[i]) / (pl.breakpoints[i + 1] - pl.breakpoints[i]);
}

}  // namespace

EdgeCostSpec EdgeCostSpec::affine(CostKind kind, double intercept, double slope,
                                  std::optional<double> capacity, double epsilon) {
  if (kind == CostKind::custom) {
    throw ValidationError("affine edge costs must be of kind link or dc");
  }
  EdgeCostSpec spec;
  spec.kind_ = kind;
  spec.intercept_ = intercept;
  spec.slope_ = slope;
  spec.capacity_ = capacity;
  spec.epsilon_ = epsilon;
  spec.validate();
  return spec;
}

EdgeCostSpec EdgeCostSpec::custom(CustomConvexCost cost, std::optional<double> capacity,
                                  double epsilon) {
  EdgeCostSpec spec;
  spec.kind_ = CostKind::custom;
  spec.custom_ = std::move(cost);
  spec.capacity_ = capacity;
  spec.epsilon_ = epsilon;
  if (const auto* pl = std::get_if<PiecewiseLinearCost>(&*spec.custom_)) {
    if (!pl->values.empty()) spec.intercept_ = pl->values.front();
    if (pl->values.size() >= 2 && pl->breakpoints.size() == pl->values.size()) {
      spec.slope_ = segment_slope(*pl, 0);
    }
  } else {
    const auto& pw = std::get<PowerLawCost>(*spec.custom_);
    spec.intercept_ = pw.offset;
    spec.slope_ = pw.exponent == 1.0 ? pw.coefficient : 0.0;
  }
  spec.validate();
  return spec;
}

EdgeCostSpec EdgeCostSpec::with_relaxation(std::optional<double> capacity,
                                           double epsilon) const {
  EdgeCostSpec spec = *this;
  spec.capacity_ = capacity;
  spec.epsilon_ = epsilon;
  spec.validate();
  return spec;
}

void EdgeCostSpec::validate() const {
  if (!finite_nonneg(intercept_)) throw ValidationError("edge cost intercept must be >= 0");
  if (!finite_nonneg(slope_)) throw ValidationError("edge cost slope must be >= 0");
  if (capacity_ && !(std::isfinite(*capacity_) && *capacity_ > 0.0)) {
    throw ValidationError("edge capacity must be positive");
  }
  if (!(std::isfinite(epsilon_) && epsilon_ > 0.0)) {
    throw ValidationError("epsilon must be positive");
  }
  if (custom_) {
    if (const auto* pl = std::get_if<PiecewiseLinearCost>(&*custom_)) {
      const auto& bp = pl->breakpoints;
      const auto& val = pl->values;
      if (bp.size() < 2 || bp.size() != val.size()) {
        throw ValidationError("piecewise cost needs >= 2 matching breakpoints and values");
      }
      if (bp.front() != 0.0) throw ValidationError("piecewise cost must start at w = 0");
      double previous = 0.0;
      for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        if (!(bp[i + 1] > bp[i]) || !std::isfinite(bp[i + 1])) {
          throw ValidationError("piecewise breakpoints must be strictly increasing");
        }
        if (!finite_nonneg(val[i]) || !finite_nonneg(val[i + 1])) {
          throw ValidationError("piecewise cost values must be finite and >= 0");
        }
        const double s = segment_slope(*pl, i);
        const double floor = i == 0 ? 0.0 : previous;
        if (s < floor - 1e-12 * std::max(1.0, std::abs(floor))) {
          throw ValidationError(
              "piecewise cost is not convex and nondecreasing (slopes must not decrease)");
        }
        previous = s;
      }
    } else {
      const auto& pw = std::get<PowerLawCost>(*custom_);
      if (!(pw.exponent >= 1.0) || !std::isfinite(pw.exponent)) {
        throw ValidationError("power-law exponent must be >= 1");
      }
      if (!finite_nonneg(pw.coefficient) || !finite_nonneg(pw.offset)) {
        throw ValidationError("power-law coefficient and offset must be >= 0");
      }
    }
  }
  if (capacity_) {
    const double at_capacity = base_price(*capacity_);
    if (1.0 / epsilon_ < at_capacity * (1.0 - 1e-12)) {
      throw ValidationError("ramp slope 1/epsilon is below the cost slope at capacity");
    }
  }
}

double EdgeCostSpec::base_cost(double w) const {
  if (!custom_) return intercept_ + slope_ * w;
  if (const auto* pl = std::get_if<PiecewiseLinearCost>(&*custom_)) {
    const std::size_t i = left_segment(*pl, w);
    return pl->values[i] + segment_slope(*pl, i) * (w - pl->breakpoints[i]);
  }
  const auto& pw = std::get<PowerLawCost>(*custom_);
  return pw.offset + pw.coefficient * std::pow(w, pw.exponent);
}

double EdgeCostSpec::base_price(double w) const {
  if (!custom_) return slope_;
  if (const auto* pl = std::get_if<PiecewiseLinearCost>(&*custom_)) {
    return segment_slope(*pl, left_segment(*pl, w));
  }
  const auto& pw = std::get<PowerLawCost>(*custom_);
  if (pw.exponent == 1.0) return pw.coefficient;
  return pw.coefficient * pw.exponent * std::pow(w, pw.exponent - 1.0);
}

double EdgeCostSpec::cost(double w) const {
  if (capacity_ && w > *capacity_) {
    return base_cost(*capacity_) + (w - *capacity_) / epsilon_;
  }
  return base_cost(w);
}

double EdgeCostSpec::price(double w) const {
  if (capacity_ && w > *capacity_) return 1.0 / epsilon_;
  return base_price(w);
}

double EdgeCostSpec::potential(double w) const { return cost(w) - cost(0.0); }

bool EdgeCostSpec::smooth() const {
  if (capacity_) return false;
  if (!custom_) return true;
  if (const auto* pl = std::get_if<PiecewiseLinearCost>(&*custom_)) {
    for (std::size_t i = 1; i + 1 < pl->breakpoints.size(); ++i) {
      if (segment_slope(*pl, i) != segment_slope(*pl, 0)) return false;
    }
  }
  return true;
}

std::vector<AffinePiece> EdgeCostSpec::affine_pieces() const {
  std::vector<AffinePiece> pieces;
  if (!custom_) {
    pieces.push_back({intercept_, slope_});
  } else if (const auto* pl = std::get_if<PiecewiseLinearCost>(&*custom_)) {
    for (std::size_t i = 0; i + 1 < pl->breakpoints.size(); ++i) {
      if (capacity_ && pl->breakpoints[i] >= *capacity_) break;
      const double s = segment_slope(*pl, i);
      pieces.push_back({pl->values[i] - s * pl->breakpoints[i], s});
    }
  } else {
    const auto& pw = std::get<PowerLawCost>(*custom_);
    if (pw.exponent != 1.0) return {};
    pieces.push_back({pw.offset, pw.coefficient});
  }
  if (capacity_) {
    const double ramp = 1.0 / epsilon_;
    pieces.push_back({base_cost(*capacity_) - ramp * *capacity_, ramp});
  }
  return pieces;
}

double edge_cost(const EdgeCostSpec& spec, double w) {
  if (!(w >= 0.0)) throw ValidationError("edge load must be nonnegative");
  return spec.cost(w);
}

double edge_price(const EdgeCostSpec& spec, double w) {
  if (!(w >= 0.0)) throw ValidationError("edge load must be nonnegative");
  return spec.price(w);
}

std::vector<double> edge_prices(const LoadVector& w, std::span<const EdgeCostSpec> specs) {
  if (w.values.size() != specs.size()) throw DimensionError("loads/specs size mismatch");
  std::vector<double> prices(specs.size());
  for (EdgeId e = 0; e < specs.size(); ++e) prices[e] = edge_price(specs[e], w.values[e]);
  return prices;
}

std::vector<double> path_price(const FlowState& x, const IncidenceMatrix& incidence,
                               std::span<const EdgeCostSpec> specs) {
  if (specs.size() != incidence.edge_count()) {
    throw DimensionError("one cost spec per edge is required");
  }
  const auto prices = edge_prices(compute_loads(x, incidence), specs);
  std::vector<double> out(incidence.path_count(), 0.0);
  for (PathId a = 0; a < out.size(); ++a) {
    const auto edges = incidence.path_edges(a);
    if (edges.empty()) {
      throw ValidationError("path " + std::to_string(a) + " has no edges");
    }
    for (EdgeId e : edges) out[a] += prices[e];
  }
  return out;
}

ConsumptionReport total_consumption(const FlowState& x, const IncidenceMatrix& incidence,
                                    std::span<const EdgeCostSpec> specs) {
  if (specs.size() != incidence.edge_count()) {
    throw DimensionError("one cost spec per edge is required");
  }
  const auto w = compute_loads(x, incidence);
  ConsumptionReport report;
  report.per_edge.resize(specs.size());
  for (EdgeId e = 0; e < specs.size(); ++e) {
    const double we = w.values[e];
    report.per_edge[e] = edge_cost(specs[e], we);
    report.total += report.per_edge[e];
    report.potential += specs[e].potential(we);
    report.physical += specs[e].base_cost(we);
  }
  return report;
}

CapacityReport capacity_violations(const LoadVector& w, std::span<const EdgeCostSpec> specs) {
  if (w.values.size() != specs.size()) throw DimensionError("loads/specs size mismatch");
  CapacityReport report;
  for (EdgeId e = 0; e < specs.size(); ++e) {
    const auto cap = specs[e].capacity();
    if (!cap) continue;
    ++report.capacitated;
    if (w.values[e] > *cap) report.violated.push_back(e);
  }
  report.no_capacities = report.capacitated == 0;
  if (!report.no_capacities) {
    report.fraction =
        static_cast<double>(report.violated.size()) / static_cast<double>(report.capacitated);
  }
  return report;
}

}  // namespace ecoroute
