// geocascade command-line tool: simulate | sweep | threshold | validate.
//
// Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geocascade/geocascade.hpp"

namespace gc = geocascade;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kIo = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config flags shared by every subcommand. Precedence: flag > --config file > default.
struct ConfigFlags {
  std::string config_path;
  std::optional<double> lambda, R, D, Ra, alpha;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App& app, bool with_alpha = true) {
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--lambda", lambda, "node density");
    app.add_option("--r", R, "connection radius");
    app.add_option("--d", D, "deployment-region diameter");
    app.add_option("--ra", Ra, "attack radius");
    if (with_alpha) app.add_option("--alpha", alpha, "tolerance parameter");
    app.add_option("--seed", seed, "master seed");
  }

  // Keys set by the file or a flag; used to enforce required values.
  std::vector<std::string> resolve(gc::NetworkConfig& c) const {
    std::vector<std::string> given;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw gc::IoError("cannot read config " + config_path);
      json j;
      try {
        in >> j;
      } catch (const json::parse_error& e) {
        throw UsageError("config " + config_path + ": " + e.what());
      }
      gc::apply_json(j, c);
      for (const auto& [k, v] : j.items()) given.push_back(k);
    }
    auto take = [&](const auto& flag, auto& field, const char* key) {
      if (flag) {
        field = *flag;
        given.push_back(key);
      }
    };
    take(lambda, c.lambda, "lambda");
    take(R, c.R, "R");
    take(D, c.D, "D");
    take(Ra, c.Ra, "Ra");
    take(alpha, c.alpha, "alpha");
    take(seed, c.seed, "seed");
    return given;
  }
};

std::vector<double> alpha_grid(const std::vector<double>& list, std::optional<double> lo,
                               std::optional<double> hi, std::optional<double> step) {
  if (!list.empty()) {
    auto out = list;
    std::sort(out.begin(), out.end());
    return out;
  }
  if (!lo || !hi || !step) throw UsageError("give --alphas or all of --alpha-min/--alpha-max/--alpha-step");
  if (!(*step > 0.0)) throw UsageError("--alpha-step must be > 0");
  if (*hi < *lo) throw UsageError("empty alpha grid: --alpha-max < --alpha-min");
  const auto n = std::size_t(std::floor((*hi - *lo) / *step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = *lo + double(i) * *step;
  return out;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  const std::filesystem::path p(path);
  auto stem = p.parent_path() / p.stem();
  return stem.string() + suffix + (p.has_extension() ? p.extension().string() : ".csv");
}

std::string lambda_tag(double lambda) {
  std::ostringstream s;
  s << lambda;
  return "_lambda" + s.str();
}

json thresholds_json(const gc::NetworkConfig& c) {
  const double au = gc::alpha_u(c);
  json j = {{"q", c.q()}, {"alpha_L", gc::alpha_l(c.q())}};
  j["alpha_U"] = std::isfinite(au) ? json(au) : json("inf");
  return j;
}

// --- simulate ---------------------------------------------------------------

struct SimulateCmd {
  ConfigFlags cfg;
  bool trace = false;
  std::string graph_out;

  int run() const {
    gc::NetworkConfig c;
    const auto given = cfg.resolve(c);
    for (const char* key : {"lambda", "R", "D", "Ra", "alpha", "seed"}) {
      if (std::find(given.begin(), given.end(), key) == given.end()) {
        throw UsageError(std::string("simulate: missing required value '") + key +
                         "' (flag or --config)");
      }
    }
    gc::validate(c);
    const auto g = gc::sample_graph(c, c.seed);
    const auto attacked = gc::apply_attack(g, c.Ra);
    const auto r = gc::run_cascade(g, attacked, c.alpha, trace ? &std::cout : nullptr);
    std::cout << std::setprecision(17);
    std::cout << "nodes " << g.node_count() << "\nedges " << g.edge_count() << "\nattacked "
              << attacked.size() << "\nconnected " << (gc::is_connected(g) ? "yes" : "no")
              << "\nF " << r.outside_failures << "\noutside " << r.outside_total << "\nf "
              << r.failure_ratio << "\nrounds " << r.rounds() << "\nstages";
    for (auto s : r.stage_failures) std::cout << ' ' << s;
    std::cout << "\nlost_load " << r.lost_load << '\n';
    for (const auto& w : gc::assumption_warnings(c)) std::cerr << "warning: " << w << '\n';
    if (!graph_out.empty()) {
      auto out = gc::open_for_write(graph_out);
      gc::write_graph(out, g);
      if (!out.flush()) throw gc::IoError("write failed: " + graph_out);
    }
    return kOk;
  }
};

// --- sweep ------------------------------------------------------------------

struct SweepCmd {
  ConfigFlags cfg;
  std::vector<double> alphas;
  std::optional<double> alpha_min, alpha_max, alpha_step;
  std::vector<double> lambdas;
  std::string out;
  std::size_t trials = 1000;
  unsigned threads = 0;
  bool connected = false;

  int run() const {
    gc::NetworkConfig c;
    cfg.resolve(c);
    gc::SweepSpec spec;
    spec.base = c;
    spec.alpha_grid = alpha_grid(alphas, alpha_min, alpha_max, alpha_step);
    spec.trials = trials;
    spec.condition_on_connected = connected;
    spec.master_seed = c.seed;
    spec.threads = threads;
    gc::validate(spec);
    for (const auto& w : gc::assumption_warnings(c)) std::cerr << "warning: " << w << '\n';

    gc::RunManifest manifest;
    manifest.command = "sweep";
    manifest.config = c;
    manifest.master_seed = c.seed;
    manifest.parameters = {{"alpha_grid", spec.alpha_grid},
                           {"trials", trials},
                           {"condition_on_connected", connected},
                           {"threads", threads},
                           {"lower_k_max", "floor(3*a_bar)"}};

    if (lambdas.empty()) {
      const auto curve = gc::sweep(spec);
      gc::write_csv_file(out, curve);
      gc::write_json_file(out + ".manifest.json", manifest.to_json());
      std::cout << "wrote " << out << " (" << curve.rows.size() << " rows)\n";
      return kOk;
    }

    const auto series = gc::lambda_series(spec, lambdas);
    json files = json::array();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const auto path = with_suffix(out, lambda_tag(lambdas[i]));
      gc::write_csv_file(path, series.curves[i]);
      files.push_back({{"lambda", lambdas[i]}, {"csv", path}});
      std::cout << "wrote " << path << '\n';
    }
    json sidecar = thresholds_json(c);
    sidecar["lambdas"] = lambdas;
    sidecar["files"] = files;
    const auto sidecar_path = with_suffix(out, "_thresholds");
    gc::write_json_file(std::filesystem::path(sidecar_path).replace_extension(".json").string(),
                        sidecar);
    manifest.parameters["lambdas"] = lambdas;
    gc::write_json_file(out + ".manifest.json", manifest.to_json());
    return kOk;
  }
};

// --- threshold --------------------------------------------------------------

struct ThresholdCmd {
  std::optional<double> q, R, Ra;
  bool as_json = false;

  int run() const {
    gc::NetworkConfig c;
    if (q) {
      if (R || Ra) throw UsageError("threshold: give --q or --r/--ra, not both");
      c.R = 1.0;
      c.Ra = *q;
    } else {
      if (!R || !Ra) throw UsageError("threshold: give --q or both --r and --ra");
      c.R = *R;
      c.Ra = *Ra;
    }
    if (!(c.R > 0.0) || !(c.Ra > 0.0)) throw UsageError("threshold: radii and q must be > 0");
    c.D = 4.0 * (c.Ra + c.R);
    const auto j = thresholds_json(c);
    if (as_json) {
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << std::setprecision(17) << "q " << c.q() << "\nalpha_U "
                << (j["alpha_U"].is_string() ? std::string("inf") : gc::format_number(j["alpha_U"]))
                << "\nalpha_L " << gc::format_number(j["alpha_L"]) << '\n';
    }
    return kOk;
  }
};

// --- validate ---------------------------------------------------------------

struct ValidateCmd {
  ConfigFlags cfg;
  gc::ValidationOptions opt;
  bool as_json = false;

  int run() {
    gc::NetworkConfig c;
    cfg.resolve(c);
    opt.alpha = c.alpha;
    opt.seed = c.seed;
    const auto report = gc::run_validation(c, opt);
    if (as_json) {
      json checks = json::array();
      for (const auto& ch : report.checks) {
        checks.push_back({{"name", ch.name},
                          {"anchor", ch.anchor},
                          {"applicable", ch.applicable},
                          {"passed", ch.passed},
                          {"detail", ch.detail}});
      }
      std::cout << json{{"passed", report.passed()}, {"checks", checks}, {"warnings", report.warnings}}
                       .dump(2)
                << '\n';
    } else {
      for (const auto& ch : report.checks) {
        const char* status = !ch.applicable ? "n/a " : ch.passed ? "ok  " : "FAIL";
        std::cout << status << ' ' << ch.name << "  " << ch.detail << "  -- " << ch.anchor << '\n';
      }
      std::cout << "warnings:" << (report.warnings.empty() ? " none" : "") << '\n';
      for (const auto& w : report.warnings) std::cout << "  " << w << '\n';
      std::cout << (report.passed() ? "PASSED" : "FAILED") << '\n';
    }
    return report.passed() ? kOk : kCheckFailed;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascading failures in random geometric graphs under a dish attack"};
  app.set_version_flag("--version", std::string(gc::kToolVersion));
  app.require_subcommand(1);

  SimulateCmd sim;
  auto* sim_app = app.add_subcommand("simulate", "run one realization");
  sim.cfg.attach(*sim_app);
  sim_app->add_flag("--trace", sim.trace, "print one line per cascade round");
  sim_app->add_option("--graph-out", sim.graph_out, "write the sampled graph snapshot");

  SweepCmd sw;
  auto* sw_app = app.add_subcommand("sweep", "Monte Carlo failure ratio and bounds over an alpha grid");
  sw.cfg.attach(*sw_app, false);
  sw_app->add_option("--alphas", sw.alphas, "explicit alpha list")->delimiter(',');
  sw_app->add_option("--alpha-min", sw.alpha_min);
  sw_app->add_option("--alpha-max", sw.alpha_max);
  sw_app->add_option("--alpha-step", sw.alpha_step);
  sw_app->add_option("--lambdas", sw.lambdas, "one CSV per density")->delimiter(',');
  sw_app->add_option("--out", sw.out, "output CSV path")->required();
  sw_app->add_option("--trials", sw.trials, "realizations per alpha")->check(CLI::PositiveNumber);
  sw_app->add_option("--threads", sw.threads, "worker threads (0 = auto)");
  sw_app->add_flag("--connected", sw.connected, "condition on connected realizations");

  ThresholdCmd th;
  auto* th_app = app.add_subcommand("threshold", "asymptotic thresholds alpha_U and alpha_L");
  th_app->add_option("--q", th.q, "Ra / R");
  th_app->add_option("--r", th.R, "connection radius");
  th_app->add_option("--ra", th.Ra, "attack radius");
  th_app->add_flag("--json", th.as_json);

  ValidateCmd va;
  auto* va_app = app.add_subcommand("validate", "numerical checks of the analytic ingredients");
  va.cfg.attach(*va_app);
  va_app->add_option("--depth", va.opt.depth, "rings to check")->check(CLI::Range(2, 1000));
  va_app->add_option("--mc-draws", va.opt.mc_draws, "first-round Monte Carlo draws (0 skips)");
  va_app->add_option("--configs", va.opt.random_configs, "random configs for the ring-mean floor");
  va_app->add_option("--threads", va.opt.threads, "worker threads (0 = auto)");
  va_app->add_flag("--json", va.as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sim_app) return sim.run();
    if (*sw_app) return sw.run();
    if (*th_app) return th.run();
    if (*va_app) return va.run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const gc::ParameterDomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kUsage;
  } catch (const gc::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const gc::SamplingError& e) {
    std::cerr << "sampling error: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}
