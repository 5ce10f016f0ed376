#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "geocascade/errors.hpp"

namespace geocascade {

/// Model parameters. All lengths share one arbitrary unit.
struct NetworkConfig {
  double lambda = 400.0;  // node density (nodes per unit area)
  double R = 0.1;         // connection radius
  double D = 1.0;         // deployment-region diameter
  double Ra = 0.1;        // attack radius
  double alpha = 2.0;     // tolerance: capacity / initial load
  std::uint64_t seed = 1;

  double region_radius() const { return 0.5 * D; }
  double region_area() const { return std::numbers::pi * region_radius() * region_radius(); }
  double q() const { return Ra / R; }
  /// Expected number of attacked nodes.
  double mean_attacked() const { return lambda * std::numbers::pi * Ra * Ra; }
  /// Expected number of nodes in the first ring (Ra, Ra + R).
  double lambda1() const {
    return lambda * std::numbers::pi * ((Ra + R) * (Ra + R) - Ra * Ra);
  }
  /// Expected degree away from boundaries.
  double mean_degree() const { return lambda * std::numbers::pi * R * R; }
};

/// Throws ParameterDomainError on a config no operation can use.
inline void validate(const NetworkConfig& c) {
  detail::require(std::isfinite(c.lambda) && c.lambda > 0.0, "lambda must be > 0");
  detail::require(std::isfinite(c.R) && c.R > 0.0, "R must be > 0");
  detail::require(std::isfinite(c.D) && c.D > 0.0, "D must be > 0");
  detail::require(std::isfinite(c.Ra) && c.Ra > 0.0, "Ra must be > 0");
  detail::require(c.Ra < 0.5 * c.D, "Ra must be < D/2");
  detail::require(std::isfinite(c.alpha) && c.alpha >= 1.0, "alpha must be >= 1");
}

/// Modelling assumptions the analysis relies on but the simulator does not.
inline std::vector<std::string> assumption_warnings(const NetworkConfig& c) {
  std::vector<std::string> out;
  if (c.mean_degree() < 6.0) {
    out.push_back("lambda*pi*R^2 = " + std::to_string(c.mean_degree()) +
                  " < 6: disconnected realizations are likely");
  }
  if (c.mean_attacked() < 3.0) {
    out.push_back("lambda*pi*Ra^2 = " + std::to_string(c.mean_attacked()) +
                  " < 3: the attack often hits no node");
  }
  return out;
}

}  // namespace geocascade
