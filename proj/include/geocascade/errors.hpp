#pragma once

#include <stdexcept>
#include <string>

namespace geocascade {

/// An argument lies outside the domain where the operation is defined.
class ParameterDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The geometry leaves a quantity undefined, e.g. a node whose whole
/// neighborhood lies inside the attack disk has no outside neighbors.
class DegenerateGeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Monte Carlo sampling cannot proceed at the requested parameters.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ParameterDomainError(message);
}

}  // namespace detail
}  // namespace geocascade
