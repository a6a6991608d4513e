#pragma once

#include "ecoroute/scenario.hpp"

namespace ecoroute::fixtures {

// One unit-rate commodity from s to {d1, d2} over two fiber links with
// costs c₁(w) = w² and c₂(w) = w. Optimum x* = (½, ½), C* = ¾.
Scenario interior();

// As interior() with c₁(w) = w and c₂(w) = 2w. Optimum x* = (1, 0), C* = 1.
Scenario strict();

// Two parallel links with identical costs c(w) = w². x* = (½, ½) is unique.
Scenario parallel_links();

// Commodities from a and b both reach {d1, d2} through a hub m; links m–d1
// and m–d2 cost w². Loads are unique but flow can be traded between the
// commodities without changing them.
Scenario shared_hub();

// Three unit-rate paths, two of which share their first link:
//   s–h–d1, s–h–d2 and s–d3.
Scenario shared_edge();

// Two unit-rate commodities competing for a link of capacity 1 costing w;
// their detours cost 20w and 25w. Hard-capacity optimum C = 21; with an
// ε-ramp steeper than the detours the relaxation is exact.
Scenario capacitated_pair(double epsilon = kDefaultEpsilon);

}  // namespace ecoroute::fixtures
