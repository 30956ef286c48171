#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "tsorder/continuous.hpp"
#include "tsorder/pmf.hpp"

namespace tsorder {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every command so CI can gate on them.
enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitOrderFails = 2,
  kExitBadConfig = 64,
  kExitDomain = 65,
};

/// One fully validated invocation.  Flags and JSON configs both land
/// here; unknown JSON keys are rejected.
struct RunConfig {
  std::string command;  // transform|order-check|os-pdf|fos-pdf|simulate|verify|battery
  std::string x;
  std::string y;
  std::string size;
  std::string parent = "uniform";
  std::string relation;
  std::string kind;  // transform kind or simulate kind
  double i = 1.0;
  double gamma = 1.5;
  int grid_points = 512;
  int curve_points = 1024;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  int replications = 100'000;
  int bins = 256;
  bool strict = false;
  std::string theorem = "all";
  std::string battery = "standard";
  std::string out;  // empty: stdout
  std::string format = "csv";

  static RunConfig from_json(const nlohmann::json& j);
  void validate() const;
};

/// Distribution mini-syntax: family:convention:params, e.g.
/// geometric:nabla:0.7, gamma_delta:2.5:1.0, degenerate:nabla:5,
/// table:nabla:path.csv.
LatticePmf parse_distribution(const std::string& spec);

/// Parent mini-syntax: uniform, exponential:rate, weibull:shape:scale.
ContinuousDist parse_continuous(const std::string& spec);

/// Executes a validated config; writes outputs atomically; returns the
/// exit code.
int run(const RunConfig& config);

}  // namespace tsorder
