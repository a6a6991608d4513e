#include "ecoroute/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ecoroute/error.hpp"

namespace ecoroute {

namespace {

void require_size(std::span<const double> v, const PathLayout& layout, const char* what) {
  if (v.size() != layout.path_count()) {
    throw DimensionError(std::string(what) + " must have one entry per path");
  }
}

}  // namespace

Divergence kl_divergence(std::span<const double> p, std::span<const double> q,
                         const PathLayout& layout) {
  require_size(p, layout, "p");
  require_size(q, layout, "q");
  Divergence d;
  for (const auto& b : layout.blocks()) {
    for (std::size_t i = b.first; i < b.first + b.count; ++i) {
      if (p[i] < 0.0 || q[i] < 0.0) throw ValidationError("flows must be nonnegative");
      if (p[i] == 0.0) continue;
      if (q[i] == 0.0) {
        d.infinite = true;
        continue;
      }
      d.value += (p[i] / b.rate) * std::log(p[i] / q[i]);
    }
  }
  if (d.infinite) d.value = std::numeric_limits<double>::infinity();
  return d;
}

double fenchel_coupling(std::span<const double> p, std::span<const double> z,
                        const PathLayout& layout) {
  require_size(p, layout, "p");
  require_size(z, layout, "z");
  double total = 0.0;
  for (const auto& b : layout.blocks()) {
    const auto lo = b.first;
    const auto hi = b.first + b.count;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i) {
      if (!std::isfinite(z[i])) throw ValidationError("dual point must be finite");
      top = std::max(top, z[i]);
    }
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += std::exp(z[i] - top);
    double entropy = 0.0;
    double pairing = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double share = p[i] / b.rate;
      if (share > 0.0) entropy += share * std::log(share);
      pairing += share * z[i];
    }
    total += entropy + top + std::log(sum) - pairing;
  }
  return total;
}

std::string_view to_string(EquilibriumClass c) {
  switch (c) {
    case EquilibriumClass::interior: return "interior";
    case EquilibriumClass::strict: return "strict";
    case EquilibriumClass::boundary_nonstrict: return "boundary-nonstrict";
  }
  return "unknown";
}

EquilibriumReport is_nash(std::span<const double> x, std::span<const double> prices,
                          const PathLayout& layout, double tol, double threshold) {
  require_size(x, layout, "x");
  require_size(prices, layout, "prices");
  EquilibriumReport report;
  report.price_spread = price_spread(x, prices, layout);
  report.nash = true;
  bool interior = true;
  bool strict = true;
  for (const auto& b : layout.blocks()) {
    const auto lo = b.first;
    const auto hi = b.first + b.count;
    double best = std::numeric_limits<double>::infinity();
    std::size_t argmin = lo;
    for (std::size_t i = lo; i < hi; ++i) {
      if (prices[i] < best) {
        best = prices[i];
        argmin = i;
      }
    }
    const double limit = best + tol * std::abs(best);
    std::size_t supported = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      const bool used = x[i] > threshold * b.rate;
      if (used) ++supported;
      else interior = false;
      if (used && prices[i] > limit) report.nash = false;
      if (i != argmin && prices[i] <= limit) strict = false;
    }
    if (supported != 1 || !(x[argmin] > threshold * b.rate)) strict = false;
  }
  if (interior) report.classification = EquilibriumClass::interior;
  else if (strict) report.classification = EquilibriumClass::strict;
  else report.classification = EquilibriumClass::boundary_nonstrict;
  return report;
}

BoundEvaluation bound_rhs(double t, const TemperatureSchedule& schedule, double sigma_star,
                          std::span<const std::size_t> path_counts, double optimum,
                          double average_consumption) {
  if (!(t > std::numbers::e)) throw ValidationError("bound needs t > e");
  if (!(sigma_star >= 0.0)) throw ValidationError("sigma* must be >= 0");
  double log_paths = 0.0;
  for (std::size_t a : path_counts) {
    if (a == 0) throw ValidationError("every commodity needs at least one path");
    log_paths += std::log(static_cast<double>(a));
  }
  const double s2 = sigma_star * sigma_star;
  BoundEvaluation out;
  out.t = t;
  out.average_consumption = average_consumption;
  out.entropy_term = log_paths / (schedule.eta(t) * t);
  out.noise_term = s2 * schedule.integral(t) / (2.0 * t);
  out.fluctuation_term = 2.0 * s2 * std::sqrt(std::log(std::log(t)) / t);
  out.optimum = optimum;
  out.rhs = optimum + out.entropy_term + out.noise_term + out.fluctuation_term +
            out.remainder_term;
  return out;
}

RateFit fit_rate_exponent(std::span<const double> t, std::span<const double> gap) {
  if (t.size() != gap.size()) throw DimensionError("t and gap must have equal length");
  if (t.size() < 20) throw ValidationError("rate fit needs at least 20 samples");
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  if (!(*lo > 0.0) || *hi / *lo < 100.0) {
    throw ValidationError("rate fit needs positive times spanning at least two decades");
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (gap[i] > 0.0 && std::isfinite(gap[i])) {
      lx.push_back(std::log(t[i]));
      ly.push_back(std::log(gap[i]));
    }
  }
  RateFit fit;
  fit.points = lx.size();
  fit.dropped = t.size() - lx.size();
  if (fit.points < 10) throw ValidationError("fewer than 10 positive gaps remain");
  const double n = static_cast<double>(fit.points);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - fit.intercept - fit.slope * lx[i];
    rss += r * r;
  }
  fit.stderr_slope = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

Occupancy ball_occupancy(const Trajectory& trajectory, std::span<const double> center,
                         double delta, double burn_in, const PathLayout& layout) {
  const auto& samples = trajectory.samples;
  if (samples.empty()) return {};
  if (!(burn_in < samples.back().t)) throw ValidationError("burn-in must precede the horizon");

  auto inside = [&](const TrajectorySample& s) {
    double d = s.distance;
    if (!s.x.empty()) {
      require_size(center, layout, "center");
      d = normalized_l1_distance(s.x, center, layout);
    } else if (d < 0.0) {
      throw ValidationError("trajectory has neither states nor tracked distances");
    }
    return d <= delta;
  };

  Occupancy out;
  double covered = 0.0;
  double span = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double a = std::max(samples[i].t, burn_in);
    const double b = samples[i + 1].t;
    if (b <= a) continue;
    const bool in_now = inside(samples[i]);
    span += b - a;
    if (in_now) covered += b - a;
    if (in_now && !inside(samples[i + 1])) out.last_exit = samples[i + 1].t;
  }
  out.fraction = span > 0.0 ? covered / span : 0.0;
  return out;
}

}  // namespace ecoroute
