#pragma once

#include <cmath>
#include <numbers>

#include "geocascade/errors.hpp"

namespace geocascade {

/// Mean of a Poisson-distributed neighbor count.
struct PoissonParam {
  double lambda_u;

  explicit PoissonParam(double mean) : lambda_u(mean) {
    detail::require(mean > 0.0 && std::isfinite(mean), "PoissonParam: mean must be finite and > 0");
  }
};

namespace detail {

inline constexpr int kMaxSeriesTerms = 500;
// Above this argument e^{-x} * series is evaluated from its asymptotic
// expansion; the neglected non-exponential part is below 1e-20 relative.
inline constexpr double kAsymptoticThreshold = 50.0;
// g itself switches to exp(x) * asymptotic beyond this point, where the
// direct series would need more than kMaxSeriesTerms terms.
inline constexpr double kDirectSeriesLimit = 200.0;

// sum_{k>=1} x^k / (k^power * k!)
inline double inverse_power_series(double x, int power) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= kMaxSeriesTerms; ++k) {
    term *= x / k;
    const double weight = power == 1 ? double(k) : double(k) * double(k);
    const double contrib = term / weight;
    sum += contrib;
    if (k > x && contrib < 1e-16 * sum) break;
  }
  return sum;
}

// e^{-x} sum_{k>=1} x^k / (k^power * k!) for large x:
//   power 1:  sum_n n! / x^{n+1}
//   power 2:  sum_n (n+1)! H_{n+1} / x^{n+2}
inline double scaled_series_asymptotic(double x, int power) {
  double sum = 0.0;
  double previous = INFINITY;
  if (power == 1) {
    double term = 1.0 / x;
    for (int n = 0; n < kMaxSeriesTerms; ++n) {
      if (n > 0) term *= n / x;
      if (term > previous) break;
      sum += term;
      if (term < 1e-17 * sum) break;
      previous = term;
    }
  } else {
    double factor = 1.0 / (x * x);
    double harmonic = 1.0;
    for (int n = 0; n < kMaxSeriesTerms; ++n) {
      if (n > 0) {
        factor *= (n + 1) / x;
        harmonic += 1.0 / (n + 1);
      }
      const double term = factor * harmonic;
      if (term > previous) break;
      sum += term;
      if (term < 1e-17 * sum) break;
      previous = term;
    }
  }
  return sum;
}

inline double scaled_inverse_power_series(double x, int power) {
  if (x <= kAsymptoticThreshold) return std::exp(-x) * inverse_power_series(x, power);
  return scaled_series_asymptotic(x, power);
}

}  // namespace detail

/// g(x) = sum_{k>=1} x^k / (k k!), equivalently the integral of
/// (e^z - 1)/z over [0, x].
inline double g(double x) {
  detail::require(x > 0.0, "g: argument must be > 0");
  if (x <= detail::kDirectSeriesLimit) return detail::inverse_power_series(x, 1);
  return std::exp(x) * detail::scaled_series_asymptotic(x, 1);
}

/// g2(x) = sum_{k>=1} x^k / (k^2 k!), the integral of g(t)/t over [0, x].
inline double g2(double x) {
  detail::require(x > 0.0, "g2: argument must be > 0");
  if (x <= detail::kDirectSeriesLimit) return detail::inverse_power_series(x, 2);
  return std::exp(x) * detail::scaled_series_asymptotic(x, 2);
}

/// E[1/d | d > 0] for d ~ Poisson(lambda_u).
inline double inv_moment1(PoissonParam p) {
  const double x = p.lambda_u;
  return detail::scaled_inverse_power_series(x, 1) / -std::expm1(-x);
}

/// E[1/d^2 | d > 0] for d ~ Poisson(lambda_u).
inline double inv_moment2(PoissonParam p) {
  const double x = p.lambda_u;
  return detail::scaled_inverse_power_series(x, 2) / -std::expm1(-x);
}

/// Standard normal CDF.
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

}  // namespace geocascade
