// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only N]...
//
// Tolerances are fixed below; nothing here is tuned per run.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geocascade/geocascade.hpp"
#include "oracles.hpp"

namespace gc = geocascade;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr std::size_t kTrials = 1000;
constexpr double kSigmas = 3.0;
constexpr double kRuntimeBudgetSeconds = 600.0;
constexpr double kUpperNearOne = 0.99;
constexpr double kContainAt3 = 0.05;
constexpr double kTransitionStep = 0.02;
constexpr double kScaleTolerance = 1e-6;
constexpr double kResidualTarget = 0.0205;
constexpr double kResidualTolerance = 0.0005;
constexpr std::size_t kFirstRoundDraws = 10000;
constexpr double kSeriesTolerance = 1e-9;
constexpr double kSymmetryTolerance = 1e-12;
constexpr double kLensRelative = 5e-3;  // 3 significant digits
constexpr double kPdfNormTolerance = 1e-6;
constexpr double kConservationRelative = 1e-9;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    pass = pass && ok;
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

std::string fmt(double x, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

gc::NetworkConfig reference_config() {
  gc::NetworkConfig c;
  c.lambda = 400;
  c.R = 0.1;
  c.Ra = 0.1;
  c.D = 1.0;
  return c;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = std::size_t(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < n; ++i) out.push_back(lo + double(i) * step);
  return out;
}

gc::BoundCurve reference_sweep(std::vector<double> alphas) {
  gc::SweepSpec spec;
  spec.base = reference_config();
  spec.alpha_grid = std::move(alphas);
  spec.trials = kTrials;
  spec.master_seed = kSeed;
  return gc::sweep(spec);
}

// 1. bounds sandwich the simulated curve
Outcome sandwich() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto curve = reference_sweep(grid(1.0, 4.0, 0.1));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  int lower_viol = 0, upper_viol = 0, applicable = 0, mono_viol = 0;
  for (std::size_t i = 0; i < curve.rows.size(); ++i) {
    const auto& r = curve.rows[i];
    const double slack = kSigmas * r.stderr_;
    if (r.lower_applicable) {
      ++applicable;
      if (r.lower > r.fbar + slack) {
        ++lower_viol;
        o.note("lower above fbar at alpha=" + fmt(r.alpha) + ": " + fmt(r.lower) + " > " + fmt(r.fbar));
      }
    }
    if (r.fbar > r.upper + slack) {
      ++upper_viol;
      o.note("fbar above upper at alpha=" + fmt(r.alpha) + ": " + fmt(r.fbar) + " > " + fmt(r.upper));
    }
    if (i > 0) {
      const auto& p = curve.rows[i - 1];
      if (r.fbar > p.fbar + kSigmas * std::hypot(r.stderr_, p.stderr_)) ++mono_viol;
    }
  }
  o.check(lower_viol == 0, "lower <= fbar + 3se at " + std::to_string(applicable) + " applicable points (" +
                               std::to_string(lower_viol) + " violations)");
  o.check(upper_viol == 0, "fbar <= upper + 3se at all " + std::to_string(curve.rows.size()) + " points (" +
                               std::to_string(upper_viol) + " violations)");
  o.check(mono_viol == 0, "fbar non-increasing up to 3se (" + std::to_string(mono_viol) + " violations)");
  o.check(seconds < kRuntimeBudgetSeconds, "runtime " + fmt(seconds, 3) + " s");
  return o;
}

// 2. upper bound suggests containment at alpha = 3
Outcome containment() {
  Outcome o;
  const auto curve = reference_sweep({1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 3.0});
  double min_upper = 1.0;
  for (const auto& r : curve.rows) {
    if (r.alpha <= 1.5 + 1e-12) min_upper = std::min(min_upper, r.upper);
  }
  const auto& at3 = curve.rows.back();
  o.check(min_upper >= kUpperNearOne, "upper >= 0.99 for alpha <= 1.5 (min " + fmt(min_upper) + ")");
  o.check(at3.upper <= kContainAt3, "upper(3) <= 0.05 (got " + fmt(at3.upper) + ")");
  o.check(at3.fbar <= kContainAt3,
          "simulated fbar(3) <= 0.05 (got " + fmt(at3.fbar) + " +- " + fmt(at3.stderr_) + ")");
  return o;
}

// 3. transition narrows and centers on alpha_U as lambda grows
Outcome phase_transition() {
  Outcome o;
  gc::SweepSpec spec;
  spec.base = reference_config();
  spec.alpha_grid = grid(1.0, 3.5, kTransitionStep);
  spec.trials = kTrials;
  spec.master_seed = kSeed;
  const std::vector<double> lambdas{100, 400, 2000};
  const auto series = gc::lambda_series(spec, lambdas);
  o.note("alpha_U = " + fmt(series.alpha_u, 10));
  std::vector<std::optional<double>> widths, offsets;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto w = gc::transition_window(series.curves[i]);
    double top = 0;
    for (const auto& r : series.curves[i].rows) top = std::max(top, r.fbar);
    std::string line = "lambda=" + fmt(lambdas[i]) + " max fbar " + fmt(top, 4);
    line += w.width() ? " width " + fmt(*w.width(), 4) : " width undefined (fbar never reaches 0.9)";
    line += w.mid ? " midpoint " + fmt(*w.mid, 4) : " midpoint undefined";
    o.note(line);
    widths.push_back(w.width());
    offsets.push_back(w.mid ? std::optional<double>(std::abs(*w.mid - series.alpha_u)) : std::nullopt);
  }
  bool widths_ok = true, offsets_ok = true;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    widths_ok = widths_ok && widths[i].has_value();
    offsets_ok = offsets_ok && offsets[i].has_value();
    if (i > 0 && widths[i] && widths[i - 1]) widths_ok = widths_ok && *widths[i] < *widths[i - 1];
    if (i > 0 && offsets[i] && offsets[i - 1]) offsets_ok = offsets_ok && *offsets[i] < *offsets[i - 1];
  }
  o.check(widths_ok, "0.9-to-0.1 width strictly shrinks over lambda = 100, 400, 2000");
  o.check(offsets_ok, "|midpoint - alpha_U| decreases over lambda = 100, 400, 2000");
  return o;
}

// 4. threshold values
Outcome thresholds() {
  Outcome o;
  o.check(gc::alpha_l(1.0) == 4.0 / 3.0, "alpha_L(1) = 4/3 (got " + fmt(gc::alpha_l(1.0), 17) + ")");
  o.check(gc::alpha_l(2.0) == 1.8, "alpha_L(2) = 1.8 (got " + fmt(gc::alpha_l(2.0), 17) + ")");
  double worst = 0;
  for (double q : {0.5, 1.0}) {
    for (double c : {0.5, 2.0}) {
      const double base = gc::alpha_u(0.1 * q, 0.1);
      worst = std::max(worst, std::abs(gc::alpha_u(c * 0.1 * q, c * 0.1) - base));
    }
  }
  o.check(worst <= kScaleTolerance, "alpha_U scale invariance, max deviation " + fmt(worst, 3));
  for (double q : {0.5, 1.0, 2.0}) {
    const double al = gc::alpha_l(q), au = gc::alpha_u(q, 1.0);
    o.check(al < au, "alpha_L < alpha_U at q=" + fmt(q) + " (" + fmt(al) + " < " + fmt(au) + ")");
  }
  return o;
}

// 5. Chernoff truncation bound
Outcome chernoff() {
  Outcome o;
  const double r = gc::truncation_residual(3.0, 9.0);
  o.check(std::abs(r - kResidualTarget) <= kResidualTolerance, "residual(3, 9) = " + fmt(r));
  gc::Rng rng(kSeed);
  int violations = 0;
  for (int i = 0; i < 20; ++i) {
    const double a = 0.5 + 50.0 * rng.uniform();
    const auto k = std::size_t(std::ceil(a * (1.0 + 3.0 * rng.uniform())));
    const double tail = oracle::poisson_upper_tail(a, k);
    if (tail > gc::truncation_residual(a, double(k))) ++violations;
  }
  o.check(violations == 0, "exact Poisson tail <= Chernoff bound for 20 pairs (" +
                               std::to_string(violations) + " violations)");
  return o;
}

// 6. first-round load model against simulation
Outcome first_round() {
  Outcome o;
  const auto c = reference_config();
  for (double r_v : {c.Ra, c.Ra + 0.5 * c.R}) {
    const auto model = gc::load_stats(r_v, c);
    const auto s = gc::sample_first_round_load(c, r_v, kFirstRoundDraws, kSeed);
    const double z_mean = std::abs(s.mean - model.mean) / s.mean_stderr;
    const double z_var = std::abs(s.variance - model.variance) / s.variance_stderr;
    o.check(z_mean <= kSigmas, "r_v=" + fmt(r_v) + " mean: simulated " + fmt(s.mean) + " +- " +
                                   fmt(s.mean_stderr, 3) + ", model " + fmt(model.mean) + " (z=" + fmt(z_mean, 3) + ")");
    o.check(z_var <= kSigmas, "r_v=" + fmt(r_v) + " variance: simulated " + fmt(s.variance) + " +- " +
                                  fmt(s.variance_stderr, 3) + ", model " + fmt(model.variance) + " (z=" +
                                  fmt(z_var, 3) + ")");
  }
  return o;
}

// 7. special functions
Outcome special_functions() {
  Outcome o;
  double worst_g = 0, worst_g2 = 0;
  for (int i = 0; i <= 20; ++i) {
    const double x = 1e-3 * std::pow(1e4, i / 20.0);  // 1e-3 .. 10
    const double gq = oracle::simpson([](double z) { return z == 0 ? 1.0 : std::expm1(z) / z; }, 0.0, x,
                                      1e-13 * std::max(1.0, std::exp(x) / x));
    worst_g = std::max(worst_g, std::abs(gc::g(x) - gq) / std::max(1.0, gq));
    const double g2q = oracle::simpson([](double t) { return t == 0 ? 1.0 : gc::g(t) / t; }, 0.0, x,
                                       1e-13 * std::max(1.0, std::exp(x) / (x * x)));
    worst_g2 = std::max(worst_g2, std::abs(gc::g2(x) - g2q) / std::max(1.0, g2q));
  }
  for (int i = 0; i <= 10; ++i) {
    const double x = 10.0 * std::pow(5.0, i / 10.0);  // 10 .. 50
    const double gq = oracle::simpson([](double z) { return z == 0 ? 1.0 : std::expm1(z) / z; }, 0.0, x,
                                      1e-13 * std::exp(x) / x);
    worst_g = std::max(worst_g, std::abs(gc::g(x) - gq) / std::max(1.0, gq));
  }
  o.check(worst_g <= kSeriesTolerance, "g series vs quadrature on [1e-3, 50], worst " + fmt(worst_g, 3));
  o.check(worst_g2 <= kSeriesTolerance, "g2 series vs quadrature on [1e-3, 10], worst " + fmt(worst_g2, 3));

  std::uint64_t seed = kSeed;
  bool mc_ok = true;
  std::string detail;
  for (double mu : {0.5, 1.0, 2.0, 5.0, 20.0}) {
    const auto mc = oracle::conditioned_inverse_moments(mu, 1'000'000, seed++);
    const double z1 = std::abs(gc::inv_moment1(gc::PoissonParam(mu)) - mc.m1) / mc.m1_se;
    const double z2 = std::abs(gc::inv_moment2(gc::PoissonParam(mu)) - mc.m2) / mc.m2_se;
    mc_ok = mc_ok && z1 <= kSigmas && z2 <= kSigmas;
    detail += " " + fmt(mu) + ":" + fmt(z1, 2) + "/" + fmt(z2, 2);
  }
  o.check(mc_ok, "inverse moments vs conditioned Poisson Monte Carlo (z1/z2)" + detail);

  double worst_sym = 0;
  for (int i = 0; i <= 400; ++i) {
    const double z = -10.0 + 0.05 * i;
    worst_sym = std::max(worst_sym, std::abs(gc::normal_cdf(z) + gc::normal_cdf(-z) - 1.0));
  }
  o.check(worst_sym <= kSymmetryTolerance, "normal CDF symmetry, worst " + fmt(worst_sym, 3));
  return o;
}

// 8. geometry
Outcome geometry() {
  Outcome o;
  gc::Rng rng(kSeed);
  double worst_lens = 0;
  for (int i = 0; i < 10; ++i) {
    const double r1 = 0.05 + 0.15 * rng.uniform();
    const double r2 = 0.05 + 0.15 * rng.uniform();
    const double d = (r1 + r2) * (0.05 + 0.9 * rng.uniform());
    const double mc = oracle::lens_area_mc(d, r1, r2, 4'000'000, kSeed + i);
    worst_lens = std::max(worst_lens, std::abs(mc / gc::lens_area(d, r1, r2) - 1.0));
  }
  o.check(worst_lens <= kLensRelative, "lens area vs rejection sampling, worst relative " + fmt(worst_lens, 3));

  double worst_pdf = 0;
  for (int i = 0; i < 10; ++i) {
    const double R = 0.05 + 0.15 * rng.uniform();
    const double Ra = 0.05 + 0.15 * rng.uniform();
    const double r_v = Ra + R * (0.01 + 0.98 * rng.uniform());
    const double lo = gc::distance_support_min(r_v, R);
    std::vector<double> cuts{lo, Ra};
    for (double c : {R - r_v, Ra - R}) {
      if (c > lo && c < Ra) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    const double total =
        oracle::simpson_pieces([&](double r) { return gc::distance_pdf(r, r_v, R, Ra); }, cuts, 1e-11);
    worst_pdf = std::max(worst_pdf, std::abs(total - 1.0));
  }
  o.check(worst_pdf <= kPdfNormTolerance, "distance density integrates to 1, worst " + fmt(worst_pdf, 3));
  return o;
}

// 9. cascade hand traces and invariants
Outcome cascade() {
  Outcome o;
  using E = std::vector<std::pair<gc::NodeId, gc::NodeId>>;
  const auto path = gc::Graph::from_edges({{0, 0}, {1, 0}, {2, 0}}, E{{0, 1}, {1, 2}});
  const std::vector<gc::NodeId> a{0};
  const auto p1 = gc::run_cascade(path, a, 2.5);
  const auto p2 = gc::run_cascade(path, a, 1.5);
  o.check(p1.outside_failures == 0 && p1.failure_ratio == 0.0, "path, alpha=2.5: F=0, f=0");
  o.check(p2.outside_failures == 2 && p2.failure_ratio == 1.0, "path, alpha=1.5: F=2, f=1");

  std::vector<gc::Point> pts{{0, 0}};
  E edges;
  for (int i = 1; i <= 10; ++i) {
    pts.push_back({std::cos(i), std::sin(i)});
    edges.emplace_back(0, gc::NodeId(i));
  }
  const auto star = gc::Graph::from_edges(pts, edges);
  o.check(gc::run_cascade(star, a, 1.05).failure_ratio == 1.0, "star of 10, alpha=1.05: f=1");
  o.check(gc::run_cascade(star, a, 1.2).failure_ratio == 0.0, "star of 10, alpha=1.2: f=0");

  const auto c = reference_config();
  int conservation = 0, containment = 0;
  for (int t = 0; t < 100; ++t) {
    const auto g = gc::sample_graph(c, gc::derive_seed(kSeed, t));
    const auto attacked = gc::apply_attack(g, c.Ra);
    for (double alpha : {1.0, 1.5, 2.0, 2.5, 3.0}) {
      const auto r = gc::run_cascade(g, attacked, alpha);
      double healthy = 0;
      for (const auto& s : r.nodes) {
        if (s.status == gc::NodeStatus::healthy) healthy += s.load;
      }
      const double n = double(g.node_count());
      if (std::abs(healthy + r.lost_load - n) > kConservationRelative * std::max(1.0, n)) ++conservation;
      for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (r.failure_round[v] <= 0) continue;
        const int ring = int(std::floor((g.position(v).norm() - c.Ra) / c.R)) + 1;
        if (r.failure_round[v] < ring) ++containment;
      }
    }
  }
  o.check(conservation == 0, "load conservation on 100 realizations x 5 alphas (" +
                                 std::to_string(conservation) + " violations)");
  o.check(containment == 0, "one ring per round on 100 realizations x 5 alphas (" +
                                std::to_string(containment) + " violations)");
  return o;
}

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(GEOCASCADE_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// 10. ring inequalities through the CLI
Outcome lemma_suite() {
  Outcome o;
  // alpha = 1.3 < alpha_L(1) = 4/3
  const auto r = run_cli("validate --lambda 400 --r 0.1 --ra 0.1 --d 1 --alpha 1.3 --depth 20 --configs 50 "
                         "--mc-draws 0 --json");
  o.check(r.code == 0, "validate exit code 0 (got " + std::to_string(r.code) + ")");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(r.out);
  } catch (const std::exception& e) {
    o.check(false, std::string("parse validate output: ") + e.what());
    return o;
  }
  auto count = [&](const std::string& prefix, bool& all_ok) {
    int n = 0;
    all_ok = true;
    for (const auto& c : j["checks"]) {
      const auto name = c["name"].get<std::string>();
      if (name.rfind(prefix, 0) != 0) continue;
      ++n;
      all_ok = all_ok && c["applicable"].get<bool>() && c["passed"].get<bool>();
    }
    return n;
  };
  bool ok = false;
  int n = count("ring-mean-floor[random]", ok);
  o.check(n == 1 && ok, "first-ring mean > 14 on 50 random configs meeting the assumptions");
  n = count("ring-ratio-chain", ok);
  o.check(n == 19 && ok, "ring ratio chain for i = 2..20 (" + std::to_string(n) + " checks)");
  n = count("first-ring-overflow", ok);
  o.check(n == 2 && ok, "first-ring overflow below alpha_L (" + std::to_string(n) + " checks)");
  n = count("cumulative-overflow", ok);
  o.check(n == 20 && ok, "cumulative overflow through depth 20 (" + std::to_string(n) + " checks)");
  return o;
}

// 11. byte-identical output
Outcome reproducibility() {
  Outcome o;
  const auto dir = fs::temp_directory_path() / "geocascade_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string common = "sweep --alpha-min 1 --alpha-max 4 --alpha-step 0.1 --trials 200 --seed 99 --out ";
  const auto a = dir / "a.csv", b = dir / "b.csv", c = dir / "c.csv";
  const int ra = run_cli(common + a.string() + " --threads 1").code;
  const int rb = run_cli(common + b.string() + " --threads 1").code;
  const int rc = run_cli(common + c.string() + " --threads 4").code;
  o.check(ra == 0 && rb == 0 && rc == 0, "three sweeps ran");
  const auto sa = slurp(a), sb = slurp(b), sc = slurp(c);
  o.check(!sa.empty() && sa == sb, "same seed, same threads: identical CSV bytes (" + std::to_string(sa.size()) + " bytes)");
  o.check(!sa.empty() && sa == sc, "same seed, 1 vs 4 threads: identical CSV bytes");
  fs::remove_all(dir);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "bounds sandwich the simulated failure ratio", sandwich},
      {2, "upper bound and simulation contained at alpha=3", containment},
      {3, "phase transition sharpens toward alpha_U", phase_transition},
      {4, "asymptotic thresholds", thresholds},
      {5, "Chernoff truncation bound", chernoff},
      {6, "first-round load model matches simulation", first_round},
      {7, "special-function identities", special_functions},
      {8, "lens area and distance density", geometry},
      {9, "cascade hand traces and invariants", cascade},
      {10, "ring inequality suite via validate", lemma_suite},
      {11, "byte-identical sweeps", reproducibility},
  };

  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--only N]...\n";
      return 2;
    }
  }

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    for (const auto& n : o.notes) std::cout << "    " << n << '\n';
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << std::endl;
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
