#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sublevy/families.hpp"
#include "sublevy/verify.hpp"

namespace sublevy {

/// Raised for malformed configuration (missing/unknown keys, bad values);
/// the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 0;  // mandatory in the file; no wall-clock default
  long samples = 100000;
  double t = 1.0;
  std::optional<std::vector<double>> grid;  // path time grid, if any
};

struct OutputConfig {
  std::string dir = ".";
  std::vector<std::string> formats = {"csv", "json"};
};

struct CfCheckRequest {
  CFCheckConfig cfg;
};
struct MomentsCheckRequest {
  long samples = 100000;
  double k_sigma = 4.0;
};
struct ScalingCheckRequest {
  double alpha = 1.0;
  double t = 2.0;
  long samples = 100000;
};
struct GrowthCheckRequest {
  std::vector<std::vector<double>> grid;
  long samples = 100000;
  double k_sigma = 4.0;
};
struct TailCheckRequest {
  long samples = 1000000;
  double top_fraction = 0.01;
  std::optional<std::pair<double, double>> expected_range;  // none: light tail
};
struct JumpMeasureCheckRequest {
  JumpMeasureCheckConfig cfg;
};

using CheckRequest =
    std::variant<CfCheckRequest, MomentsCheckRequest, ScalingCheckRequest,
                 GrowthCheckRequest, TailCheckRequest, JumpMeasureCheckRequest>;

const char* check_id(const CheckRequest& request);

struct ExperimentConfig {
  std::string family;  // hnig | stable | hvg | custom
  SubordinatedProcessSpec spec;
  std::optional<double> family_alpha;  // stable family index
  bool family_degenerate = false;      // HNIG with c = 0
  RunConfig run;
  std::vector<CheckRequest> checks;
  OutputConfig output;
  nlohmann::json echo;  // the parsed document, for report round-trips

  /// Strict parse: unknown keys anywhere are an error.
  static ExperimentConfig from_json(const nlohmann::json& doc);
  static ExperimentConfig load(const std::string& path);
};

/// Runs the configured battery; check k draws its seed from the SplitMix64
/// chain started at `seed`, so adding a check never disturbs earlier ones.
std::vector<VerificationReport> run_checks(const ExperimentConfig& config,
                                           std::uint64_t seed, int threads);

/// "0.5,0.2;1.0" -> components split by ';', coefficients by ','.
Vector parse_probe(const SpaceLayout& layout, const std::string& text);

}  // namespace sublevy
