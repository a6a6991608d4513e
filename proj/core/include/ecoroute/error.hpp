#pragma once

#include <stdexcept>
#include <string>

namespace ecoroute {

// Malformed input: broken paths, inconsistent commodities, bad configs.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Vectors/matrices whose sizes do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A primal (replicator-form) integrator was handed a state on the
// boundary of the simplex, where log x is undefined.
class BoundaryStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Non-finite values appeared while integrating.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ecoroute
