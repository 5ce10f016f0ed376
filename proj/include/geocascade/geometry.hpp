#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "geocascade/errors.hpp"

namespace geocascade {

/// A circle whose center sits on a fixed ray from the origin.
struct Circle {
  double center_distance = 0.0;
  double radius = 1.0;

  Circle() = default;
  Circle(double center_distance_, double radius_)
      : center_distance(center_distance_), radius(radius_) {
    detail::require(center_distance >= 0.0, "Circle: center distance must be >= 0");
    detail::require(radius > 0.0, "Circle: radius must be > 0");
  }
};

namespace detail {

inline double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// Lens area without argument checks; d >= 0, r1, r2 > 0 assumed.
inline double lens_area_unchecked(double d, double r1, double r2) {
  const double rmin = std::min(r1, r2);
  const double rmax = std::max(r1, r2);
  if (d >= r1 + r2) return 0.0;
  if (d + rmin <= rmax) return std::numbers::pi * rmin * rmin;

  const double a = clamp_unit((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2));
  const double b = clamp_unit((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1));
  const double k = (-d + r1 + r2) * (d + r2 - r1) * (d - r2 + r1) * (d + r2 + r1);
  const double area = r2 * r2 * std::acos(a) + r1 * r1 * std::acos(b) -
                      0.5 * std::sqrt(std::max(k, 0.0));
  return std::clamp(area, 0.0, std::numbers::pi * rmin * rmin);
}

// Area of the neighborhood disk (radius R, center at distance r) outside
// the attack disk (radius Ra, centered at the origin). Zero when covered.
inline double exterior_area_unchecked(double r, double R, double Ra) {
  if (r + R <= Ra) return 0.0;
  return std::max(std::numbers::pi * R * R - lens_area_unchecked(r, R, Ra), 0.0);
}

// Angular extent 2*theta of the circle of radius r (centered at the origin)
// that lies within distance R of a point at distance r_v, times r.
inline double arc_weight(double r, double r_v, double R) {
  if (r <= 0.0) return 0.0;
  if (r + r_v <= R) return 2.0 * std::numbers::pi * r;
  if (r_v <= 0.0) return 0.0;
  const double c = clamp_unit((r_v * r_v - R * R + r * r) / (2.0 * r_v * r));
  return 2.0 * r * std::acos(c);
}

}  // namespace detail

/// Area of the intersection of two circles whose centers are `d` apart.
inline double lens_area(double d, double r1, double r2) {
  detail::require(d >= 0.0, "lens_area: center distance must be >= 0");
  detail::require(r1 > 0.0 && r2 > 0.0, "lens_area: radii must be > 0");
  return detail::lens_area_unchecked(d, r1, r2);
}

inline double lens_area(const Circle& a, const Circle& b) {
  return lens_area(std::abs(b.center_distance - a.center_distance), a.radius, b.radius);
}

/// Area of a node's neighborhood (radius R, node at distance r from the
/// attack center) that lies outside the attack disk of radius Ra.
///
/// Returns std::nullopt when the neighborhood is entirely inside the attack
/// disk: such a node has no neighbors outside the attack, and quantities
/// conditioned on having one are undefined.
inline std::optional<double> exterior_area(double r, double R, double Ra) {
  detail::require(R > 0.0 && Ra > 0.0, "exterior_area: radii must be > 0");
  detail::require(r >= 0.0 && r < Ra, "exterior_area: requires 0 <= r < Ra");
  const double area = detail::exterior_area_unchecked(r, R, Ra);
  if (!(area > 0.0)) return std::nullopt;
  return area;
}

/// Lower end of the support of distance_pdf.
inline double distance_support_min(double r_v, double R) { return std::max(0.0, r_v - R); }

/// Density of the distance to the origin of a point drawn uniformly from the
/// intersection of the attack disk (radius Ra) and the disk of radius R
/// around a node at distance r_v >= Ra. Zero outside the support.
inline double distance_pdf(double r, double r_v, double R, double Ra) {
  detail::require(R > 0.0 && Ra > 0.0, "distance_pdf: radii must be > 0");
  detail::require(r_v >= Ra, "distance_pdf: requires r_v >= Ra");
  detail::require(r_v < Ra + R, "distance_pdf: requires r_v < Ra + R (empty intersection)");
  if (r < distance_support_min(r_v, R) || r > Ra) return 0.0;
  const double area = detail::lens_area_unchecked(r_v, R, Ra);
  return detail::arc_weight(r, r_v, R) / area;
}

}  // namespace geocascade
