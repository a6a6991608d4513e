#pragma once

#include <span>
#include <vector>

#include "ecoroute/consumption.hpp"
#include "ecoroute/topology.hpp"

namespace ecoroute {

/// The congestion game the dynamics act on: which paths belong to which
/// commodity, which edges each path uses, and what each edge costs.
/// Immutable and safe to share between concurrent runs.
class CongestionModel {
 public:
  CongestionModel() = default;
  CongestionModel(PathLayout layout, IncidenceMatrix incidence,
                  std::vector<EdgeCostSpec> costs);

  const PathLayout& layout() const { return layout_; }
  const IncidenceMatrix& incidence() const { return incidence_; }
  std::span<const EdgeCostSpec> costs() const { return costs_; }
  std::size_t path_count() const { return layout_.path_count(); }
  std::size_t edge_count() const { return incidence_.edge_count(); }

  std::vector<double> prices(const FlowState& x) const;
  ConsumptionReport consumption(const FlowState& x) const;
  LoadVector loads(const FlowState& x) const;

  // Uniform split of every commodity's rate over its paths.
  FlowState uniform_flow() const;

  // Same game with every capacitated edge's ε replaced.
  CongestionModel with_epsilon(double epsilon) const;

 private:
  PathLayout layout_;
  IncidenceMatrix incidence_;
  std::vector<EdgeCostSpec> costs_;
};

/// Scratch buffers for allocation-free price/cost evaluation inside
/// integration loops. One per trajectory.
class ModelWorkspace {
 public:
  explicit ModelWorkspace(const CongestionModel& model);

  // Fills loads, edge prices and path prices for x; returns C(x).
  double evaluate(std::span<const double> x);

  std::span<const double> loads() const { return loads_; }
  std::span<const double> edge_prices() const { return edge_prices_; }
  std::span<const double> path_prices() const { return path_prices_; }

 private:
  const CongestionModel* model_;
  std::vector<double> loads_;
  std::vector<double> edge_prices_;
  std::vector<double> path_prices_;
};

// Edge prices at the loads of x_ref with each load clamped to its capacity,
// so the ε-ramp never enters. Used as the reference for price
// normalization and fraction-of-mean volatility.
std::vector<double> reference_edge_prices(const CongestionModel& model, const FlowState& x_ref);

// Largest reference path price (Σ of reference edge prices); 1 if every
// path is free.
double reference_price_scale(const CongestionModel& model, const FlowState& x_ref);

// Σ_s Σ_{α∈P_s} |x_α − z_α| / ρ_s.
double normalized_l1_distance(std::span<const double> x, std::span<const double> z,
                              const PathLayout& layout);

}  // namespace ecoroute
