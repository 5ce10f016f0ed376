#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace geocascade::quad {

// Relative tolerance handed to the adaptive Gauss-Kronrod driver. For the
// O(1) integrands in this library it keeps the absolute error below 1e-8.
inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr unsigned kMaxDepth = 18;

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

template <class F>
Estimate integrate_with_error(F&& f, double a, double b,
                              double tolerance = kDefaultTolerance) {
  if (!(b > a)) return {};
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
          f, a, b, kMaxDepth, tolerance, &error);
  return {value, error};
}

template <class F>
double integrate(F&& f, double a, double b,
                 double tolerance = kDefaultTolerance) {
  return integrate_with_error(f, a, b, tolerance).value;
}

// Integrates over [a, b] split at every breakpoint strictly inside the
// interval. Use this to keep kinks of the integrand on panel edges.
template <class F>
Estimate integrate_pieces_with_error(F&& f, double a, double b,
                                     std::initializer_list<double> breakpoints,
                                     double tolerance = kDefaultTolerance) {
  if (!(b > a)) return {};
  std::vector<double> edges{a};
  for (double p : breakpoints) {
    if (p > a && p < b && std::isfinite(p)) edges.push_back(p);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  Estimate total;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const auto piece = integrate_with_error(f, edges[i], edges[i + 1], tolerance);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

template <class F>
double integrate_pieces(F&& f, double a, double b,
                        std::initializer_list<double> breakpoints,
                        double tolerance = kDefaultTolerance) {
  return integrate_pieces_with_error(f, a, b, breakpoints, tolerance).value;
}

}  // namespace geocascade::quad
