#include "ecoroute/model.hpp"

#include <algorithm>
#include <cmath>

#include "ecoroute/error.hpp"

namespace ecoroute {

CongestionModel::CongestionModel(PathLayout layout, IncidenceMatrix incidence,
                                 std::vector<EdgeCostSpec> costs)
    : layout_(std::move(layout)), incidence_(std::move(incidence)), costs_(std::move(costs)) {
  if (layout_.path_count() != incidence_.path_count()) {
    throw DimensionError("path layout and incidence matrix disagree on the path count");
  }
  if (costs_.size() != incidence_.edge_count()) {
    throw DimensionError("one cost spec per edge is required");
  }
  for (PathId a = 0; a < incidence_.path_count(); ++a) {
    if (incidence_.path_edges(a).empty()) {
      throw ValidationError("path " + std::to_string(a) + " has no edges");
    }
  }
}

std::vector<double> CongestionModel::prices(const FlowState& x) const {
  return path_price(x, incidence_, costs_);
}

ConsumptionReport CongestionModel::consumption(const FlowState& x) const {
  return total_consumption(x, incidence_, costs_);
}

LoadVector CongestionModel::loads(const FlowState& x) const {
  return compute_loads(x, incidence_);
}

FlowState CongestionModel::uniform_flow() const {
  FlowState x{std::vector<double>(path_count(), 0.0)};
  for (const auto& b : layout_.blocks()) {
    for (std::size_t i = 0; i < b.count; ++i) {
      x.values[b.first + i] = b.rate / static_cast<double>(b.count);
    }
  }
  return x;
}

CongestionModel CongestionModel::with_epsilon(double epsilon) const {
  std::vector<EdgeCostSpec> costs;
  costs.reserve(costs_.size());
  for (const auto& c : costs_) {
    costs.push_back(c.capacity() ? c.with_relaxation(c.capacity(), epsilon) : c);
  }
  return CongestionModel(layout_, incidence_, std::move(costs));
}

ModelWorkspace::ModelWorkspace(const CongestionModel& model)
    : model_(&model),
      loads_(model.edge_count()),
      edge_prices_(model.edge_count()),
      path_prices_(model.path_count()) {}

double ModelWorkspace::evaluate(std::span<const double> x) {
  const auto& inc = model_->incidence();
  compute_loads_into(x, inc, loads_);
  const auto costs = model_->costs();
  double total = 0.0;
  for (EdgeId e = 0; e < loads_.size(); ++e) {
    const double w = loads_[e];
    if (!(w >= 0.0)) throw ValidationError("edge load must be nonnegative");
    edge_prices_[e] = costs[e].price(w);
    total += costs[e].cost(w);
  }
  for (PathId a = 0; a < path_prices_.size(); ++a) {
    double p = 0.0;
    for (EdgeId e : inc.path_edges(a)) p += edge_prices_[e];
    path_prices_[a] = p;
  }
  return total;
}

std::vector<double> reference_edge_prices(const CongestionModel& model,
                                          const FlowState& x_ref) {
  const auto w = model.loads(x_ref);
  const auto costs = model.costs();
  std::vector<double> prices(costs.size());
  for (EdgeId e = 0; e < costs.size(); ++e) {
    double load = w.values[e];
    if (const auto cap = costs[e].capacity()) load = std::min(load, *cap);
    prices[e] = edge_price(costs[e], load);
  }
  return prices;
}

double reference_price_scale(const CongestionModel& model, const FlowState& x_ref) {
  const auto prices = reference_edge_prices(model, x_ref);
  double scale = 0.0;
  for (PathId a = 0; a < model.path_count(); ++a) {
    double p = 0.0;
    for (EdgeId e : model.incidence().path_edges(a)) p += prices[e];
    scale = std::max(scale, p);
  }
  return scale > 0.0 ? scale : 1.0;
}

double normalized_l1_distance(std::span<const double> x, std::span<const double> z,
                              const PathLayout& layout) {
  if (x.size() != layout.path_count() || z.size() != layout.path_count()) {
    throw DimensionError("distance operands do not match the path layout");
  }
  double total = 0.0;
  for (const auto& b : layout.blocks()) {
    double block = 0.0;
    for (std::size_t i = b.first; i < b.first + b.count; ++i) block += std::abs(x[i] - z[i]);
    total += block / b.rate;
  }
  return total;
}

}  // namespace ecoroute
