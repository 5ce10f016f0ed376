#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace geocascade {

/// Name recorded in run manifests so outputs can be traced to a generator.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64; seeds derived by splitmix64 mixing of (master, trial, attempt); "
    "uniform = top 53 bits; poisson = product method (mean < 10) / PTRS";

/// splitmix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for stream `stream` (e.g. a trial index) and retry `attempt` under
/// a master seed. Independent of scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t attempt = 0) {
  return mix64(mix64(master) ^ mix64(stream * 0xd1b54a32d192ed03ULL + attempt));
}

/// Portable random source: every draw is a deterministic function of the seed
/// across platforms (up to libm rounding in the PTRS acceptance test).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean < 10.0) return poisson_product(mean);
    return poisson_ptrs(mean);
  }

 private:
  std::uint64_t poisson_product(double mean) {
    const double limit = std::exp(-mean);
    double product = uniform();
    std::uint64_t k = 0;
    while (product > limit) {
      product *= uniform();
      ++k;
    }
    return k;
  }

  // Hormann's transformed rejection with squeeze (PTRS).
  std::uint64_t poisson_ptrs(double mean) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      const double u = uniform() - 0.5;
      const double v = uniform();
      const double us = 0.5 - std::abs(u);
      const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= vr) return std::uint64_t(k);
      if (k < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
          -mean + k * loglam - std::lgamma(k + 1.0)) {
        return std::uint64_t(k);
      }
    }
  }

  std::mt19937_64 engine_;
};

}  // namespace geocascade
