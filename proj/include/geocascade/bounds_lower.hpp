#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "geocascade/config.hpp"
#include "geocascade/errors.hpp"
#include "geocascade/rgg.hpp"
#include "geocascade/specfun.hpp"

namespace geocascade {

/// Expected node counts of the attack disk and of the rings around it.
struct RingSequence {
  double a_bar = 0.0;               // attack disk
  std::vector<double> ring_means;   // ring_means[i - 1] is ring i
  double q = 0.0;                   // Ra / R

  static RingSequence make(const NetworkConfig& c, std::size_t depth) {
    validate(c);
    RingSequence s;
    s.a_bar = c.mean_attacked();
    s.q = c.q();
    s.ring_means.reserve(depth);
    for (std::size_t i = 1; i <= depth; ++i) s.ring_means.push_back(ring_mean(c, int(i)));
    return s;
  }

  /// Mean of ring i (i >= 1); ring 0 is the attack disk.
  double operator[](std::size_t i) const { return i == 0 ? a_bar : ring_means.at(i - 1); }
};

struct LowerBound {
  double value = 0.0;
  bool applicable = false;  // false outside alpha < 3/2 + q, where no bound is given
  std::size_t k_max = 0;
};

/// Largest alpha (exclusive) for which the lower bound applies.
inline double lower_bound_alpha_limit(double q) { return 1.5 + q; }

/// Lower bound on the mean failure ratio: the probability that the attack
/// hits more nodes than the first ring can absorb, with the ring count
/// replaced by a Gaussian of equal mean and variance. The Poisson sum is
/// truncated after k_max terms (default floor(3 * a_bar)).
inline LowerBound lower_bound(double alpha, const NetworkConfig& c,
                              std::optional<std::size_t> k_max = std::nullopt) {
  validate(c);
  detail::require(alpha > 1.0, "lower_bound: alpha must be > 1");
  const double a_bar = c.mean_attacked();
  LowerBound out;
  out.k_max = k_max.value_or(std::size_t(std::floor(3.0 * a_bar)));
  if (!(alpha < lower_bound_alpha_limit(c.q()))) return out;
  out.applicable = true;

  const double a1 = c.lambda1();
  const double sd1 = std::sqrt(a1);
  const double log_a = std::log(a_bar);
  double sum = 0.0;
  for (std::size_t k = 1; k <= out.k_max; ++k) {
    const double kk = double(k);
    const double log_pmf = -a_bar + kk * log_a - std::lgamma(kk + 1.0);
    sum += normal_cdf((kk / (alpha - 1.0) - a1) / sd1) * std::exp(log_pmf);
  }
  out.value = std::clamp(sum, 0.0, 1.0);
  return out;
}

/// Chernoff bound on P(a >= k_max) for a ~ Poisson(a_bar), which dominates
/// the part of the lower-bound sum dropped by truncating at k_max.
inline double truncation_residual(double a_bar, double k_max) {
  detail::require(a_bar > 0.0, "truncation_residual: mean must be > 0");
  detail::require(k_max >= a_bar, "truncation_residual: requires k_max >= mean");
  return std::exp(-a_bar + k_max * (1.0 + std::log(a_bar) - std::log(k_max)));
}

/// Asymptotic threshold of the lower bound, 1 + q^2 / (1 + 2q).
inline double alpha_l(double q) {
  detail::require(q > 0.0, "alpha_l: q must be > 0");
  return 1.0 + q * q / (1.0 + 2.0 * q);
}

struct InequalityCheck {
  std::string name;
  int index = 0;            // ring index the check refers to
  bool applicable = true;   // hypothesis satisfied
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct RingInequalityReport {
  std::vector<InequalityCheck> checks;

  /// True when every applicable check holds.
  bool all_hold() const {
    for (const auto& c : checks) {
      if (c.applicable && !c.holds) return false;
    }
    return true;
  }

  std::vector<InequalityCheck> named(const std::string& name) const {
    std::vector<InequalityCheck> out;
    for (const auto& c : checks) {
      if (c.name == name) out.push_back(c);
    }
    return out;
  }
};

namespace check_names {
inline constexpr const char* kRingMeanFloor = "ring-mean-floor";
inline constexpr const char* kSecondRingRatio = "second-ring-ratio";
inline constexpr const char* kRingRatioChain = "ring-ratio-chain";
inline constexpr const char* kFirstRingOverflow = "first-ring-overflow";
inline constexpr const char* kCumulativeOverflow = "cumulative-overflow";
}  // namespace check_names

/// Evaluates the ring-mean inequalities behind the lower bound and its
/// asymptotic threshold, each gated on its hypothesis:
///   ring-mean-floor      every ring mean > 14           (needs lambda pi R^2 >= 6, a_bar >= 3)
///   second-ring-ratio    a2/a1 < alpha/(alpha-1)        (needs alpha - 1 < 1/2 + q)
///   ring-ratio-chain     a_{i+1}/a_i <= a_i/a_{i-1}     (unconditional, i >= 2)
///   first-ring-overflow  a1(alpha-1) < a, a2(alpha-1) < a + a1   (needs alpha < alpha_l)
///   cumulative-overflow  a + a1 + ... + a_i > a_{i+1}(alpha-1)   (needs alpha < alpha_l)
inline RingInequalityReport ring_inequalities(const NetworkConfig& c, double alpha,
                                              std::size_t depth) {
  detail::require(depth >= 2, "ring_inequalities: depth must be >= 2");
  detail::require(alpha >= 1.0, "ring_inequalities: alpha must be >= 1");
  const auto rings = RingSequence::make(c, depth + 1);
  const double q = rings.q;
  const double excess = alpha - 1.0;
  RingInequalityReport report;
  using namespace check_names;

  const bool floor_hyp = c.mean_degree() >= 6.0 && c.mean_attacked() >= 3.0;
  for (std::size_t i = 1; i <= depth; ++i) {
    report.checks.push_back({kRingMeanFloor, int(i), floor_hyp, rings[i] > 14.0, rings[i], 14.0});
  }

  const bool ratio_hyp = excess < 0.5 + q;
  const double ratio_limit = excess > 0.0 ? alpha / excess : INFINITY;
  report.checks.push_back({kSecondRingRatio, 2, ratio_hyp, rings[2] / rings[1] < ratio_limit,
                           rings[2] / rings[1], ratio_limit});

  for (std::size_t i = 2; i <= depth; ++i) {
    // a_{i+1} a_{i-1} <= a_i^2, compared as products.
    const double lhs = rings[i + 1] * rings[i - 1];
    const double rhs = rings[i] * rings[i];
    report.checks.push_back({kRingRatioChain, int(i), true, lhs <= rhs * (1.0 + 1e-12),
                             rings[i + 1] / rings[i], rings[i] / rings[i - 1]});
  }

  const bool overflow_hyp = alpha < alpha_l(q);
  report.checks.push_back({kFirstRingOverflow, 1, overflow_hyp, rings[1] * excess < rings[0],
                           rings[1] * excess, rings[0]});
  report.checks.push_back({kFirstRingOverflow, 2, overflow_hyp,
                           rings[2] * excess < rings[1] + rings[0], rings[2] * excess,
                           rings[1] + rings[0]});

  double cumulative = rings[0];
  for (std::size_t i = 1; i <= depth; ++i) {
    cumulative += rings[i];
    const double next = rings[i + 1] * excess;
    report.checks.push_back({kCumulativeOverflow, int(i), overflow_hyp, cumulative > next,
                             cumulative, next});
  }
  return report;
}

}  // namespace geocascade
