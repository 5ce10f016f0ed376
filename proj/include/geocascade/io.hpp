#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "geocascade/config.hpp"
#include "geocascade/harness.hpp"
#include "geocascade/random.hpp"

#ifndef GEOCASCADE_VERSION
#define GEOCASCADE_VERSION "0.0.0"
#endif

namespace geocascade {

inline constexpr const char* kToolVersion = GEOCASCADE_VERSION;
inline constexpr const char* kCsvHeader =
    "alpha,fbar,stderr,upper,lower,lower_applicable,trials,disconnected";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, enough for a double to round-trip.
inline std::string format_number(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

inline void write_csv(std::ostream& out, const BoundCurve& curve) {
  out << kCsvHeader << '\n';
  for (const auto& r : curve.rows) {
    out << format_number(r.alpha) << ',' << format_number(r.fbar) << ','
        << format_number(r.stderr_) << ',' << format_number(r.upper) << ','
        << format_number(r.lower) << ',' << (r.lower_applicable ? 1 : 0) << ',' << r.trials << ','
        << r.disconnected << '\n';
  }
}

inline std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

inline void write_csv_file(const std::string& path, const BoundCurve& curve) {
  auto out = open_for_write(path);
  write_csv(out, curve);
  if (!out.flush()) throw IoError("write failed: " + path);
}

inline nlohmann::json to_json(const NetworkConfig& c) {
  return {{"lambda", c.lambda}, {"R", c.R}, {"D", c.D},
          {"Ra", c.Ra},         {"alpha", c.alpha}, {"seed", c.seed}};
}

/// Reads the keys present in `j` over `c`. Unknown keys are rejected.
inline void apply_json(const nlohmann::json& j, NetworkConfig& c) {
  if (!j.is_object()) throw ParameterDomainError("config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "lambda") c.lambda = value.get<double>();
    else if (key == "R") c.R = value.get<double>();
    else if (key == "D") c.D = value.get<double>();
    else if (key == "Ra") c.Ra = value.get<double>();
    else if (key == "alpha") c.alpha = value.get<double>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else throw ParameterDomainError("config: unknown key '" + key + "'");
  }
}

inline NetworkConfig load_config_file(const std::string& path, NetworkConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterDomainError("config " + path + ": " + e.what());
  }
  apply_json(j, base);
  return base;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Everything needed to regenerate an output file.
struct RunManifest {
  std::string command;
  NetworkConfig config;
  std::uint64_t master_seed = 0;
  nlohmann::json parameters = nlohmann::json::object();
  std::string timestamp = utc_timestamp();

  nlohmann::json to_json() const {
    return {{"tool", "geocascade"},
            {"version", kToolVersion},
            {"command", command},
            {"config", geocascade::to_json(config)},
            {"master_seed", master_seed},
            {"rng", kRngAlgorithm},
            {"timestamp", timestamp},
            {"parameters", parameters}};
  }
};

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
  if (!out.flush()) throw IoError("write failed: " + path);
}

}  // namespace geocascade
