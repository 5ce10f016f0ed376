#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "geocascade/bounds_lower.hpp"
#include "geocascade/bounds_upper.hpp"
#include "geocascade/cascade.hpp"
#include "geocascade/config.hpp"
#include "geocascade/errors.hpp"
#include "geocascade/random.hpp"
#include "geocascade/rgg.hpp"

namespace geocascade {

struct SweepSpec {
  NetworkConfig base;
  std::vector<double> alpha_grid;
  std::size_t trials = 1000;
  bool condition_on_connected = false;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
};

inline void validate(const SweepSpec& s) {
  validate(s.base);
  detail::require(s.trials >= 1, "sweep: trials must be >= 1");
  detail::require(!s.alpha_grid.empty(), "sweep: alpha grid is empty");
  detail::require(std::is_sorted(s.alpha_grid.begin(), s.alpha_grid.end()),
                  "sweep: alpha grid must be sorted ascending");
  for (double a : s.alpha_grid) {
    detail::require(std::isfinite(a) && a >= 1.0, "sweep: every alpha must be >= 1");
  }
}

struct FbarEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t trials = 0;
  std::size_t disconnected = 0;  // disconnected draws seen (rejected when conditioning)
};

struct BoundRow {
  double alpha = 0.0;
  double fbar = 0.0;
  double stderr_ = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  bool lower_applicable = false;
  std::size_t trials = 0;
  std::size_t disconnected = 0;
};

struct BoundCurve {
  NetworkConfig config;
  std::vector<BoundRow> rows;
};

namespace detail {

inline unsigned resolve_threads(unsigned requested, std::size_t work) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return unsigned(std::max<std::size_t>(1, std::min<std::size_t>(n, work)));
}

// Runs body(i) for i in [0, count) on `threads` workers. Results must be
// written to per-index slots; the first exception is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = resolve_threads(threads, count);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline constexpr std::size_t kProbeBatch = 100;
inline constexpr double kMaxRejectionRate = 0.99;
inline constexpr std::uint64_t kProbeStream = 0xC0FFEEULL << 40;
inline constexpr std::uint32_t kMaxAttempts = 100000;

// Draws enough graphs to tell whether rejection sampling of connected graphs
// is feasible; throws SamplingError when the rejection rate exceeds 99%.
inline void probe_connectivity(const NetworkConfig& c, std::uint64_t master, unsigned threads) {
  std::vector<char> connected(kProbeBatch, 0);
  parallel_for(kProbeBatch, threads, [&](std::size_t i) {
    connected[i] = is_connected(sample_graph(c, derive_seed(master, kProbeStream + i)));
  });
  const auto rejected = std::size_t(std::count(connected.begin(), connected.end(), 0));
  if (double(rejected) > kMaxRejectionRate * double(kProbeBatch)) {
    throw SamplingError("connected-graph sampling infeasible: " + std::to_string(rejected) +
                        " of " + std::to_string(kProbeBatch) +
                        " probe draws were disconnected (lambda*pi*R^2 = " +
                        std::to_string(c.mean_degree()) + ")");
  }
}

struct TrialOutcome {
  std::vector<double> ratios;  // one per alpha
  std::uint32_t disconnected = 0;
};

// One realization shared by every alpha. With conditioning, disconnected
// draws are replaced by the next attempt for the same trial index.
inline TrialOutcome run_trial(const NetworkConfig& c, std::span<const double> alphas,
                              std::uint64_t master, std::size_t trial, bool conditioned) {
  TrialOutcome out;
  for (std::uint32_t attempt = 0;; ++attempt) {
    if (attempt >= kMaxAttempts) {
      throw SamplingError("connected-graph sampling: trial " + std::to_string(trial) +
                          " exhausted its attempts");
    }
    const Graph g = sample_graph(c, derive_seed(master, trial, attempt));
    if (!is_connected(g)) {
      ++out.disconnected;
      if (conditioned) continue;
    }
    const auto attacked = apply_attack(g, c.Ra);
    out.ratios.reserve(alphas.size());
    for (double a : alphas) out.ratios.push_back(run_cascade(g, attacked, a).failure_ratio);
    return out;
  }
}

inline void summarize(std::span<const TrialOutcome> outcomes, std::size_t column,
                      FbarEstimate& est) {
  const std::size_t n = outcomes.size();
  double sum = 0.0;
  for (const auto& o : outcomes) sum += o.ratios[column];
  const double mean = sum / double(n);
  double ss = 0.0;
  for (const auto& o : outcomes) {
    const double d = o.ratios[column] - mean;
    ss += d * d;
  }
  est.mean = std::clamp(mean, 0.0, 1.0);
  est.stderr_ = n > 1 ? std::sqrt(ss / double(n - 1) / double(n)) : 0.0;
  est.trials = n;
  est.disconnected = 0;
  for (const auto& o : outcomes) est.disconnected += o.disconnected;
}

}  // namespace detail

/// Monte Carlo estimates of the mean failure ratio at every alpha in the
/// spec's grid, all from the same realizations. Trial t uses the seed
/// derive_seed(master_seed, t, attempt), so results do not depend on the
/// thread count or scheduling.
inline std::vector<FbarEstimate> estimate_fbar_grid(const SweepSpec& spec) {
  validate(spec);
  if (spec.condition_on_connected) {
    detail::probe_connectivity(spec.base, spec.master_seed, spec.threads);
  }
  std::vector<detail::TrialOutcome> outcomes(spec.trials);
  detail::parallel_for(spec.trials, spec.threads, [&](std::size_t t) {
    outcomes[t] = detail::run_trial(spec.base, spec.alpha_grid, spec.master_seed, t,
                                    spec.condition_on_connected);
  });
  std::vector<FbarEstimate> out(spec.alpha_grid.size());
  for (std::size_t j = 0; j < out.size(); ++j) detail::summarize(outcomes, j, out[j]);
  return out;
}

/// Estimate of the mean failure ratio at cfg.alpha.
inline FbarEstimate estimate_fbar(const NetworkConfig& c, std::size_t trials,
                                  std::uint64_t master_seed, bool condition_on_connected = false,
                                  unsigned threads = 0) {
  SweepSpec spec{c, {c.alpha}, trials, condition_on_connected, master_seed, threads};
  return estimate_fbar_grid(spec).front();
}

/// Simulation plus both bounds at every alpha in the grid.
inline BoundCurve sweep(const SweepSpec& spec) {
  const auto estimates = estimate_fbar_grid(spec);
  const FirstRoundProfile profile(spec.base);
  BoundCurve curve;
  curve.config = spec.base;
  for (std::size_t j = 0; j < spec.alpha_grid.size(); ++j) {
    const double a = spec.alpha_grid[j];
    BoundRow row;
    row.alpha = a;
    row.fbar = estimates[j].mean;
    row.stderr_ = estimates[j].stderr_;
    row.upper = profile.upper_bound(a);
    if (a > 1.0) {
      const auto lb = lower_bound(a, spec.base);
      row.lower = lb.value;
      row.lower_applicable = lb.applicable;
    }
    row.trials = estimates[j].trials;
    row.disconnected = estimates[j].disconnected;
    curve.rows.push_back(row);
  }
  return curve;
}

struct LambdaSeries {
  std::vector<double> lambdas;
  std::vector<BoundCurve> curves;
  double alpha_u = 0.0;
  double alpha_l = 0.0;
};

/// One sweep per density, sharing everything else in the spec.
inline LambdaSeries lambda_series(const SweepSpec& spec, const std::vector<double>& lambdas) {
  detail::require(!lambdas.empty(), "lambda_series: no densities given");
  LambdaSeries out;
  out.lambdas = lambdas;
  for (double l : lambdas) {
    SweepSpec s = spec;
    s.base.lambda = l;
    out.curves.push_back(sweep(s));
  }
  out.alpha_u = alpha_u(spec.base);
  out.alpha_l = alpha_l(spec.base.q());
  return out;
}

/// Alphas where the simulated curve first falls through 0.9, 0.5 and 0.1,
/// by linear interpolation between grid points. Empty when never crossed.
struct TransitionWindow {
  std::optional<double> high;  // f = 0.9
  std::optional<double> mid;   // f = 0.5
  std::optional<double> low;   // f = 0.1

  std::optional<double> width() const {
    if (!high || !low) return std::nullopt;
    return *low - *high;
  }
};

inline std::optional<double> first_crossing(const BoundCurve& curve, double level) {
  const auto& rows = curve.rows;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double f0 = rows[i].fbar, f1 = rows[i + 1].fbar;
    if (f0 >= level && f1 < level) {
      const double t = (f0 - level) / (f0 - f1);
      return rows[i].alpha + t * (rows[i + 1].alpha - rows[i].alpha);
    }
  }
  return std::nullopt;
}

inline TransitionWindow transition_window(const BoundCurve& curve) {
  return {first_crossing(curve, 0.9), first_crossing(curve, 0.5), first_crossing(curve, 0.1)};
}

/// Empirical first-round load at a probe node placed at (r_v, 0).
struct LoadSample {
  double r_v = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
  std::size_t draws = 0;
};

/// Adds a probe node at distance r_v from the attack center to each sampled
/// realization and records the load it receives when the attacked nodes fail.
inline LoadSample sample_first_round_load(const NetworkConfig& c, double r_v, std::size_t draws,
                                          std::uint64_t master_seed, unsigned threads = 0) {
  validate(c);
  detail::require(draws >= 2, "sample_first_round_load: need at least 2 draws");
  detail::require(r_v >= c.Ra && r_v < c.region_radius(),
                  "sample_first_round_load: probe must lie outside the attack, inside the region");
  std::vector<double> loads(draws);
  detail::parallel_for(draws, threads, [&](std::size_t t) {
    Rng rng(derive_seed(master_seed, t));
    auto points = sample_positions(c, rng);
    points.push_back({r_v, 0.0});
    const Graph g(std::move(points), c.R);
    const auto received = first_round_received_loads(g, apply_attack(g, c.Ra));
    loads[t] = received.back();
  });

  const double n = double(draws);
  double sum = 0.0;
  for (double x : loads) sum += x;
  const double mean = sum / n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : loads) {
    const double d = x - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  LoadSample s;
  s.r_v = r_v;
  s.draws = draws;
  s.mean = mean;
  s.variance = m2 * n / (n - 1.0);
  s.mean_stderr = std::sqrt(s.variance / n);
  // Var(sample variance) ~ (mu4 - sigma^4) / n.
  s.variance_stderr = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
  return s;
}

}  // namespace geocascade
