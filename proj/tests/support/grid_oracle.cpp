#include "grid_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecoroute::testing {

GridOptimum grid_search(std::size_t paths, double rate, double resolution,
                        const std::function<double(std::span<const double>)>& objective) {
  if (paths < 2 || paths > 3) throw std::invalid_argument("grid search handles 2 or 3 paths");
  const auto n = static_cast<long>(std::llround(1.0 / resolution));
  GridOptimum best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<double> x(paths);
  auto consider = [&] {
    const double v = objective(x);
    if (v < best.value) {
      best.value = v;
      best.x = x;
    }
  };
  for (long i = 0; i <= n; ++i) {
    if (paths == 2) {
      x[0] = rate * static_cast<double>(i) / static_cast<double>(n);
      x[1] = rate * static_cast<double>(n - i) / static_cast<double>(n);
      consider();
      continue;
    }
    for (long j = 0; i + j <= n; ++j) {
      x[0] = rate * static_cast<double>(i) / static_cast<double>(n);
      x[1] = rate * static_cast<double>(j) / static_cast<double>(n);
      x[2] = rate * static_cast<double>(n - i - j) / static_cast<double>(n);
      consider();
    }
  }
  return best;
}

}  // namespace ecoroute::testing
