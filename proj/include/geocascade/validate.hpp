#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "geocascade/bounds_lower.hpp"
#include "geocascade/bounds_upper.hpp"
#include "geocascade/config.hpp"
#include "geocascade/harness.hpp"
#include "geocascade/random.hpp"

namespace geocascade {

struct ValidationCheck {
  std::string name;
  std::string anchor;  // what the check establishes
  bool applicable = true;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::vector<std::string> warnings;

  bool passed() const {
    for (const auto& c : checks) {
      if (c.applicable && !c.passed) return false;
    }
    return true;
  }
};

struct ValidationOptions {
  double alpha = 2.0;
  std::size_t depth = 20;
  std::size_t random_configs = 50;
  std::size_t mc_draws = 2000;  // 0 skips the Monte Carlo first-round check
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

namespace detail {

inline std::string describe(double lhs, const char* op, double rhs) {
  std::ostringstream s;
  s.precision(10);
  s << lhs << ' ' << op << ' ' << rhs;
  return s.str();
}

// Draws a config satisfying lambda pi R^2 >= 6 and lambda pi Ra^2 >= 3.
inline NetworkConfig random_valid_config(Rng& rng) {
  NetworkConfig c;
  c.R = 0.02 + 0.18 * rng.uniform();
  c.Ra = c.R * (0.2 + 2.8 * rng.uniform());
  c.D = 2.0 * (c.Ra + 20.0 * c.R);
  const double floor = std::max(6.0 / (std::numbers::pi * c.R * c.R),
                                3.0 / (std::numbers::pi * c.Ra * c.Ra));
  c.lambda = floor * (1.0 + 4.0 * rng.uniform());
  return c;
}

inline ValidationCheck from_inequality(const InequalityCheck& ic, const char* anchor,
                                       const char* op) {
  return {ic.name + "[" + std::to_string(ic.index) + "]", anchor, ic.applicable, ic.holds,
          describe(ic.lhs, op, ic.rhs)};
}

}  // namespace detail

/// Numerical checks of the ring-mean inequalities, threshold ordering and
/// (optionally) the first-round load model against simulation.
inline ValidationReport run_validation(const NetworkConfig& c, const ValidationOptions& opt) {
  validate(c);
  ValidationReport report;
  report.warnings = assumption_warnings(c);
  using namespace check_names;

  const auto rings = ring_inequalities(c, opt.alpha, opt.depth);
  for (const auto& ic : rings.checks) {
    if (ic.name == kRingMeanFloor) {
      report.checks.push_back(
          detail::from_inequality(ic, "ring mean exceeds 14 under the density assumptions", ">"));
    } else if (ic.name == kSecondRingRatio) {
      report.checks.push_back(detail::from_inequality(
          ic, "second-to-first ring ratio below alpha/(alpha-1)", "<"));
    } else if (ic.name == kRingRatioChain) {
      report.checks.push_back(
          detail::from_inequality(ic, "successive ring ratios are non-increasing", "<="));
    } else if (ic.name == kFirstRingOverflow) {
      report.checks.push_back(detail::from_inequality(
          ic, "inner rings cannot absorb the attack below alpha_L", "<"));
    } else if (ic.name == kCumulativeOverflow) {
      report.checks.push_back(detail::from_inequality(
          ic, "cumulative load exceeds the next ring's spare capacity below alpha_L", ">"));
    }
  }

  Rng rng(derive_seed(opt.seed, 0x5eedULL));
  std::size_t floor_failures = 0;
  std::string worst;
  double worst_value = INFINITY;
  for (std::size_t i = 0; i < opt.random_configs; ++i) {
    const auto rc = detail::random_valid_config(rng);
    const double a1 = rc.lambda1();
    if (!(a1 > 14.0)) ++floor_failures;
    if (a1 < worst_value) {
      worst_value = a1;
      worst = "min first-ring mean " + std::to_string(a1);
    }
  }
  if (opt.random_configs > 0) {
    report.checks.push_back({"ring-mean-floor[random]",
                             "first ring mean exceeds 14 on random configs meeting the assumptions",
                             true, floor_failures == 0,
                             std::to_string(opt.random_configs) + " configs, " + worst});
  }

  const double au = alpha_u(c);
  const double al = alpha_l(c.q());
  report.checks.push_back({"threshold-order", "alpha_L < alpha_U", true, al < au,
                           detail::describe(al, "<", au)});

  if (opt.mc_draws > 0) {
    for (double r_v : {c.Ra, c.Ra + 0.5 * c.R}) {
      const auto model = load_stats(r_v, c);
      const auto sample = sample_first_round_load(c, r_v, opt.mc_draws, opt.seed, opt.threads);
      const double z_mean = std::abs(sample.mean - model.mean) / sample.mean_stderr;
      const double z_var = std::abs(sample.variance - model.variance) / sample.variance_stderr;
      std::ostringstream d;
      d.precision(6);
      d << "r_v=" << r_v << " mean " << sample.mean << " vs " << model.mean << " (z=" << z_mean
        << "), variance " << sample.variance << " vs " << model.variance << " (z=" << z_var
        << "), draws=" << sample.draws;
      report.checks.push_back({"first-round-load", "simulated first-round load matches the model",
                               true, z_mean <= 3.0 && z_var <= 3.0, d.str()});
    }
  }
  return report;
}

}  // namespace geocascade
