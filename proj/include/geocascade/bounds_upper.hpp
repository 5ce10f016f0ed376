#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

// Boost 1.74's pchip calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>

#include "geocascade/config.hpp"
#include "geocascade/errors.hpp"
#include "geocascade/geometry.hpp"
#include "geocascade/quadrature.hpp"
#include "geocascade/specfun.hpp"

namespace geocascade {

/// Mean and variance of the load a node at distance r_v from the attack
/// center receives from attacked neighbors in the first redistribution.
struct LoadStats {
  double r_v = 0.0;
  double mean = 0.0;
  double variance = 0.0;

  double stddev() const { return std::sqrt(variance); }
};

namespace detail {

// E[1/d | d > 0] and E[1/d^2 | d > 0] as functions of the Poisson mean,
// extended by their limit 1 at mean 0.
inline double mean_share(double mu) { return mu > 0.0 ? inv_moment1(PoissonParam(mu)) : 1.0; }
inline double mean_square_share(double mu) {
  return mu > 0.0 ? inv_moment2(PoissonParam(mu)) : 1.0;
}

inline void require_first_ring(double r_v, const NetworkConfig& c, const char* who) {
  detail::require(r_v >= c.Ra && r_v <= c.Ra + c.R,
                  std::string(who) + ": requires Ra <= r_v <= Ra + R");
}

}  // namespace detail

/// Expected share of an attacked node at distance r (< Ra) handed to each of
/// its neighbors outside the attack.
inline double h1(double r, const NetworkConfig& c) {
  validate(c);
  const auto outside = exterior_area(r, c.R, c.Ra);
  if (!outside) throw DegenerateGeometryError("h1: node has no neighbors outside the attack");
  return inv_moment1(PoissonParam(c.lambda * *outside));
}

/// Second moment of the same share.
inline double h2(double r, const NetworkConfig& c) {
  validate(c);
  const auto outside = exterior_area(r, c.R, c.Ra);
  if (!outside) throw DegenerateGeometryError("h2: node has no neighbors outside the attack");
  return inv_moment2(PoissonParam(c.lambda * *outside));
}

/// True when the whole attack disk lies within the neighborhood of a node at r_v.
inline bool attack_within_neighborhood(double r_v, const NetworkConfig& c) {
  return c.R - r_v >= c.Ra;
}

/// First-round load statistics by quadrature over the distance density,
/// without the closed form for attack_within_neighborhood().
inline LoadStats load_stats_by_quadrature(double r_v, const NetworkConfig& c) {
  validate(c);
  detail::require_first_ring(r_v, c, "load_stats");
  if (r_v >= c.Ra + c.R) return {r_v, 0.0, 0.0};

  const double lo = distance_support_min(r_v, c.R);
  const double hi = c.Ra;
  const double area = detail::lens_area_unchecked(r_v, c.R, c.Ra);
  auto lambda_j = [&](double r) {
    return c.lambda * detail::exterior_area_unchecked(r, c.R, c.Ra);
  };
  // arc_weight(r) = area * density(r); integrating against it avoids 0/0
  // as the intersection shrinks.
  auto first = [&](double r) { return detail::mean_share(lambda_j(r)) * detail::arc_weight(r, r_v, c.R); };
  auto second = [&](double r) {
    return detail::mean_square_share(lambda_j(r)) * detail::arc_weight(r, r_v, c.R);
  };
  const double m1 = quad::integrate_pieces(first, lo, hi, {c.R - r_v, c.Ra - c.R, c.R - c.Ra});
  const double m2 = quad::integrate_pieces(second, lo, hi, {c.R - r_v, c.Ra - c.R, c.R - c.Ra});

  LoadStats s;
  s.r_v = r_v;
  s.mean = c.lambda * m1;
  s.variance = area > 0.0 ? std::max(c.lambda * (m2 - m1 * m1 / area), 0.0) : 0.0;
  return s;
}

/// Mean and variance of the first-round load at distance r_v in [Ra, Ra + R].
/// At r_v = Ra + R both vanish.
inline LoadStats load_stats(double r_v, const NetworkConfig& c) {
  validate(c);
  detail::require_first_ring(r_v, c, "load_stats");
  if (!attack_within_neighborhood(r_v, c)) return load_stats_by_quadrature(r_v, c);

  // Every attacked node is a neighbor, and each one's exterior area is the
  // same annulus-like region.
  const double exterior = std::numbers::pi * (c.R * c.R - c.Ra * c.Ra);
  const double share = detail::mean_share(c.lambda * exterior);
  const double share2 = detail::mean_square_share(c.lambda * exterior);
  const double neighbors = c.mean_attacked();
  return {r_v, neighbors * share, std::max(neighbors * (share2 - share * share), 0.0)};
}

/// P(received load > threshold) under the Gaussian approximation; a zero
/// variance collapses to the deterministic comparison.
inline double gaussian_exceedance(double mean, double stddev, double threshold) {
  if (!(stddev > 0.0)) return mean > threshold ? 1.0 : 0.0;
  return normal_cdf((mean - threshold) / stddev);
}

/// Probability that a node at r_v is overloaded by the first redistribution.
inline double failure_prob(double r_v, double alpha, const NetworkConfig& c) {
  detail::require(alpha >= 1.0, "failure_prob: alpha must be >= 1");
  const auto s = load_stats(r_v, c);
  return gaussian_exceedance(s.mean, s.stddev(), alpha - 1.0);
}

/// First-round load statistics tabulated over the first ring, so that
/// sweeping alpha does not repeat the inner quadrature.
class FirstRoundProfile {
 public:
  explicit FirstRoundProfile(const NetworkConfig& c, std::size_t grid_points = 257) : config_(c) {
    validate(c);
    detail::require(grid_points >= 5, "FirstRoundProfile: need at least 5 grid points");
    std::vector<double> r(grid_points), mean(grid_points), sd(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i) {
      const double t = double(i) / double(grid_points - 1);
      r[i] = i + 1 == grid_points ? c.Ra + c.R : c.Ra + t * c.R;
      const auto s = load_stats(r[i], c);
      mean[i] = s.mean;
      sd[i] = s.stddev();
    }
    auto r_copy = r;
    mean_ = std::make_shared<Interp>(std::move(r_copy), std::move(mean));
    sd_ = std::make_shared<Interp>(std::move(r), std::move(sd));
  }

  const NetworkConfig& config() const { return config_; }

  /// Interpolated statistics; r_v is clamped to the first ring.
  LoadStats at(double r_v) const {
    const double x = std::clamp(r_v, config_.Ra, config_.Ra + config_.R);
    const double sd = std::max((*sd_)(x), 0.0);
    return {x, std::max((*mean_)(x), 0.0), sd * sd};
  }

  /// Probability that a node placed uniformly in the first ring absorbs its
  /// first-round load (load <= alpha - 1).
  double p1(double alpha) const {
    detail::require(alpha >= 1.0, "p1: alpha must be >= 1");
    const double threshold = alpha - 1.0;
    const double inner = config_.Ra;
    const double outer = config_.Ra + config_.R;
    const double ring_area = std::numbers::pi * (outer * outer - inner * inner);
    auto integrand = [&](double r_v) {
      const auto s = at(r_v);
      const double absorbed = 1.0 - gaussian_exceedance(s.mean, s.stddev(), threshold);
      return absorbed * 2.0 * std::numbers::pi * r_v / ring_area;
    };
    const double value = quad::integrate(integrand, inner, outer, 1e-8);
    return std::clamp(value, 0.0, 1.0);
  }

  /// Upper bound on the mean failure ratio: 1 - exp(-lambda1 (1 - p1)).
  double upper_bound(double alpha) const {
    const double exposed = config_.lambda1() * (1.0 - p1(alpha));
    return std::clamp(-std::expm1(-exposed), 0.0, 1.0);
  }

 private:
  using Interp = boost::math::interpolators::pchip<std::vector<double>>;

  NetworkConfig config_;
  std::shared_ptr<Interp> mean_;
  std::shared_ptr<Interp> sd_;
};

inline double p1(double alpha, const NetworkConfig& c) { return FirstRoundProfile(c).p1(alpha); }

inline double upper_bound(double alpha, const NetworkConfig& c) {
  return FirstRoundProfile(c).upper_bound(alpha);
}

/// Expected number of attacked neighbors of a node on the attack border,
/// lambda * |intersection|. The Gaussian load model wants this well above 1.
inline double border_attacked_neighbors(const NetworkConfig& c) {
  return c.lambda * lens_area(c.Ra, c.R, c.Ra);
}

/// Limit of the first-round load at r_v as lambda grows without bound:
/// the integral of arc_weight(r) / J(r) over the distance support, where
/// J(r) is the exterior area of an attacked neighbor at distance r.
///
/// For Ra > R and r_v = Ra, J vanishes at the inner end of the support and
/// the integral diverges logarithmically; +infinity is returned.
inline double asymptotic_load(double r_v, const NetworkConfig& c) {
  validate(c);
  detail::require_first_ring(r_v, c, "asymptotic_load");
  if (r_v >= c.Ra + c.R) return 0.0;
  if (c.Ra > c.R && r_v <= c.Ra) return std::numeric_limits<double>::infinity();

  const double lo = distance_support_min(r_v, c.R);
  auto integrand = [&](double r) {
    const double exterior = detail::exterior_area_unchecked(r, c.R, c.Ra);
    if (!(exterior > 0.0)) return 0.0;
    return detail::arc_weight(r, r_v, c.R) / exterior;
  };
  return quad::integrate_pieces(integrand, lo, c.Ra, {c.R - r_v, c.Ra - c.R, c.R - c.Ra}, 1e-12);
}

/// Asymptotic tolerance threshold 1 + asymptotic_load(Ra). Depends only on Ra / R.
inline double alpha_u(const NetworkConfig& c) { return 1.0 + asymptotic_load(c.Ra, c); }

inline double alpha_u(double Ra, double R) {
  NetworkConfig c;
  c.R = R;
  c.Ra = Ra;
  c.D = 4.0 * (Ra + R);
  return alpha_u(c);
}

/// Large-network failure ratio: a step from 1 to 0 at alpha_u (inclusive).
inline int asymptotic_failure_ratio(double alpha, const NetworkConfig& c) {
  return alpha >= alpha_u(c) ? 0 : 1;
}

}  // namespace geocascade
